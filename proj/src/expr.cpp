#include "ruledgeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <type_traits>

#include "ruledgeo/errors.hpp"

namespace ruledgeo {

// --------------------------------------------------------------------------
// Jet3 arithmetic
// --------------------------------------------------------------------------

Jet3 operator+(const Jet3& a, const Jet3& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
}

Jet3 operator-(const Jet3& a, const Jet3& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
}

Jet3 operator-(const Jet3& a) { return {-a.value, -a.d1, -a.d2, -a.d3}; }

Jet3 operator*(const Jet3& a, const Jet3& b) {
  return {a.value * b.value,
          a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2,
          a.d3 * b.value + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.value * b.d3};
}

Jet3 operator*(double c, const Jet3& a) { return {c * a.value, c * a.d1, c * a.d2, c * a.d3}; }

Jet3 compose(const Jet3& u, double f0, double f1, double f2, double f3) {
  const double u1 = u.d1;
  const double u2 = u.d2;
  const double u3 = u.d3;
  return {f0,
          f1 * u1,
          f2 * u1 * u1 + f1 * u2,
          f3 * u1 * u1 * u1 + 3.0 * f2 * u1 * u2 + f1 * u3};
}

// --------------------------------------------------------------------------
// Expr construction
// --------------------------------------------------------------------------

const char* to_string(Function f) {
  switch (f) {
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Tan: return "tan";
    case Function::Atan: return "atan";
    case Function::Sqrt: return "sqrt";
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Abs: return "abs";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Pow: return "^";
  }
  return "?";
}

Expr::Expr() : Expr(number(0.0)) {}

Expr::Expr(std::shared_ptr<const ast::Node> node) : node_(std::move(node)) {}

const ast::Node& Expr::node() const { return *node_; }

Expr Expr::number(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite numeric literal");
  if (std::signbit(value)) return negate(number(-value));
  return Expr(std::make_shared<const ast::Node>(ast::Number{value}));
}

Expr Expr::variable() { return Expr(std::make_shared<const ast::Node>(ast::Variable{})); }

Expr Expr::pi() { return Expr(std::make_shared<const ast::Node>(ast::Pi{})); }

Expr Expr::negate(Expr operand) {
  return Expr(std::make_shared<const ast::Node>(ast::Negate{std::move(operand)}));
}

Expr Expr::call(Function fn, Expr argument) {
  return Expr(std::make_shared<const ast::Node>(ast::Call{fn, std::move(argument)}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (op == BinaryOp::Pow && !rhs.is_constant()) {
    throw std::invalid_argument("exponent of '^' must be constant");
  }
  return Expr(std::make_shared<const ast::Node>(ast::Binary{op, std::move(lhs), std::move(rhs)}));
}

bool Expr::is_constant() const {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Variable>) {
          return false;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return n.operand.is_constant();
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          return n.argument.is_constant();
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return n.lhs.is_constant() && n.rhs.is_constant();
        } else {
          return true;
        }
      },
      *node_);
}

namespace {

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string Expr::to_string() const {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          return format_number(n.value);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return "s";
        } else if constexpr (std::is_same_v<T, ast::Pi>) {
          return "pi";
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return "(-" + n.operand.to_string() + ")";
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          return std::string(ruledgeo::to_string(n.fn)) + "(" + n.argument.to_string() + ")";
        } else {
          return "(" + n.lhs.to_string() + " " + ruledgeo::to_string(n.op) + " " + n.rhs.to_string() + ")";
        }
      },
      *node_);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->index() != b.node_->index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(*b.node_);
        if constexpr (std::is_same_v<T, ast::Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return x.operand == y.operand;
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          return x.fn == y.fn && x.argument == y.argument;
        } else if constexpr (std::is_same_v<T, ast::Binary>) {
          return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
        } else {
          return true;
        }
      },
      *a.node_);
}

// --------------------------------------------------------------------------
// Parser
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?
//   primary := number | 's' | 'pi' | function '(' expr ')' | '(' expr ')'
// --------------------------------------------------------------------------

namespace {

std::optional<Function> lookup_function(std::string_view name) {
  static constexpr std::pair<std::string_view, Function> kTable[] = {
      {"sin", Function::Sin},   {"cos", Function::Cos}, {"tan", Function::Tan},
      {"atan", Function::Atan}, {"sqrt", Function::Sqrt}, {"exp", Function::Exp},
      {"log", Function::Log},   {"abs", Function::Abs},
  };
  for (const auto& [key, fn] : kTable) {
    if (key == name) return fn;
  }
  return std::nullopt;
}

std::string join_expected(const std::vector<std::string>& expected) {
  std::string out;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) out += ", ";
    out += expected[i];
  }
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail({"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> expected) const { fail_at(pos_, std::move(expected)); }

  [[noreturn]] void fail_at(std::size_t offset, std::vector<std::string> expected) const {
    std::string found = offset < text_.size() ? "'" + std::string(1, text_[offset]) + "'" : "end of input";
    std::string msg = "syntax error at offset " + std::to_string(offset) + ": found " + found +
                      ", expected one of: " + join_expected(expected);
    throw ParseError(offset, std::move(expected), msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail({std::string("'") + c + "'"});
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, std::move(lhs), parse_term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, std::move(lhs), parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, std::move(lhs), parse_unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, std::move(lhs), parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t exponent_offset = pos_;
      Expr exponent = parse_unary();
      if (!exponent.is_constant()) fail_at(exponent_offset, {"constant exponent"});
      return Expr::binary(BinaryOp::Pow, std::move(base), std::move(exponent));
    }
    return base;
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail(primary_expected());
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    if (accept('(')) {
      Expr inner = parse_expr();
      expect(')');
      return inner;
    }
    fail(primary_expected());
  }

  static std::vector<std::string> primary_expected() {
    return {"number", "'s'", "'pi'", "function name", "'('", "'-'"};
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail_at(start, {"number"});
    return Expr::number(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "s") return Expr::variable();
    if (name == "pi") return Expr::pi();
    if (auto fn = lookup_function(name)) {
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return Expr::call(*fn, std::move(arg));
    }
    throw UnknownIdentifier(start, std::string(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// --------------------------------------------------------------------------
// Evaluation
// --------------------------------------------------------------------------

bool is_integer(double p) { return std::isfinite(p) && p == std::round(p) && std::abs(p) < 1e9; }

Jet3 power(const Jet3& u, double p, const Expr& where, double s) {
  const double x = u.value;
  if (is_integer(p)) {
    if (x == 0.0 && p < 0.0) throw DomainError(where.to_string(), s, "division by zero");
    double f[4];
    double coefficient = 1.0;
    for (int k = 0; k < 4; ++k) {
      f[k] = coefficient == 0.0 ? 0.0 : coefficient * std::pow(x, p - k);
      coefficient *= (p - k);
    }
    return compose(u, f[0], f[1], f[2], f[3]);
  }
  if (x <= 0.0) throw DomainError(where.to_string(), s, "non-integer power of nonpositive base");
  const double f0 = std::pow(x, p);
  return compose(u, f0, p * f0 / x, p * (p - 1) * f0 / (x * x), p * (p - 1) * (p - 2) * f0 / (x * x * x));
}

Jet3 apply(Function fn, const Jet3& u, const Expr& where, double s) {
  const double x = u.value;
  switch (fn) {
    case Function::Sin: {
      const double sn = std::sin(x), cs = std::cos(x);
      return compose(u, sn, cs, -sn, -cs);
    }
    case Function::Cos: {
      const double sn = std::sin(x), cs = std::cos(x);
      return compose(u, cs, -sn, -cs, sn);
    }
    case Function::Tan: {
      if (std::cos(x) == 0.0) throw DomainError(where.to_string(), s, "tan pole");
      const double t = std::tan(x);
      const double sec2 = 1.0 + t * t;
      return compose(u, t, sec2, 2.0 * t * sec2, 2.0 * sec2 * (1.0 + 3.0 * t * t));
    }
    case Function::Atan: {
      const double q = 1.0 + x * x;
      return compose(u, std::atan(x), 1.0 / q, -2.0 * x / (q * q), (6.0 * x * x - 2.0) / (q * q * q));
    }
    case Function::Sqrt: {
      if (x < 0.0) throw DomainError(where.to_string(), s, "sqrt of negative argument");
      if (x == 0.0) {
        if (u.is_constant()) return Jet3::constant(0.0);
        throw DomainError(where.to_string(), s, "sqrt is not differentiable at 0");
      }
      const double r = std::sqrt(x);
      return compose(u, r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x));
    }
    case Function::Exp: {
      const double e = std::exp(x);
      return compose(u, e, e, e, e);
    }
    case Function::Log: {
      if (x <= 0.0) throw DomainError(where.to_string(), s, "log of nonpositive argument");
      return compose(u, std::log(x), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x));
    }
    case Function::Abs: {
      if (x == 0.0) {
        if (u.is_constant()) return Jet3::constant(0.0);
        throw DomainError(where.to_string(), s, "abs is not differentiable at 0");
      }
      const double sign = x > 0.0 ? 1.0 : -1.0;
      return compose(u, std::abs(x), sign, 0.0, 0.0);
    }
  }
  return u;
}

Jet3 evaluate(const Expr& e, double s) {
  return std::visit(
      [&](const auto& n) -> Jet3 {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ast::Number>) {
          return Jet3::constant(n.value);
        } else if constexpr (std::is_same_v<T, ast::Variable>) {
          return Jet3::variable(s);
        } else if constexpr (std::is_same_v<T, ast::Pi>) {
          return Jet3::constant(std::numbers::pi);
        } else if constexpr (std::is_same_v<T, ast::Negate>) {
          return -evaluate(n.operand, s);
        } else if constexpr (std::is_same_v<T, ast::Call>) {
          return apply(n.fn, evaluate(n.argument, s), e, s);
        } else {
          const Jet3 a = evaluate(n.lhs, s);
          switch (n.op) {
            case BinaryOp::Add: return a + evaluate(n.rhs, s);
            case BinaryOp::Sub: return a - evaluate(n.rhs, s);
            case BinaryOp::Mul: return a * evaluate(n.rhs, s);
            case BinaryOp::Div: {
              const Jet3 b = evaluate(n.rhs, s);
              const double x = b.value;
              if (x == 0.0) throw DomainError(e.to_string(), s, "division by zero");
              const double x2 = x * x;
              return a * compose(b, 1.0 / x, -1.0 / x2, 2.0 / (x2 * x), -6.0 / (x2 * x2));
            }
            case BinaryOp::Pow: return power(a, evaluate(n.rhs, s).value, e, s);
          }
          return a;
        }
      },
      e.node());
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).parse_all(); }

Jet3 eval_jet(const Expr& e, double s) { return evaluate(e, s); }

double eval(const Expr& e, double s) { return evaluate(e, s).value; }

}  // namespace ruledgeo
