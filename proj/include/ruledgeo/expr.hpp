#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

namespace ruledgeo {

// --------------------------------------------------------------------------
// Jet3: value plus first three derivatives with respect to the parameter.
// --------------------------------------------------------------------------

struct Jet3 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr Jet3 constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static constexpr Jet3 variable(double s) { return {s, 1.0, 0.0, 0.0}; }

  bool is_constant() const { return d1 == 0.0 && d2 == 0.0 && d3 == 0.0; }

  friend bool operator==(const Jet3&, const Jet3&) = default;
};

Jet3 operator+(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a, const Jet3& b);
Jet3 operator-(const Jet3& a);
Jet3 operator*(const Jet3& a, const Jet3& b);
Jet3 operator*(double c, const Jet3& a);

/// Chain rule to third order: returns f(u) given f and its first three
/// derivatives evaluated at u.value.
Jet3 compose(const Jet3& u, double f0, double f1, double f2, double f3);

// --------------------------------------------------------------------------
// Expr: immutable syntax tree of a scalar function of `s`.
// --------------------------------------------------------------------------

enum class Function { Sin, Cos, Tan, Atan, Sqrt, Exp, Log, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

const char* to_string(Function f);
const char* to_string(BinaryOp op);

class Expr;

namespace ast {
struct Number;
struct Variable;
struct Pi;
struct Negate;
struct Call;
struct Binary;
using Node = std::variant<Number, Variable, Pi, Negate, Call, Binary>;
}  // namespace ast

class Expr {
 public:
  /// Constant 0.
  Expr();

  /// Negative values become Negate(Number(|value|)), the form the parser
  /// produces. Throws std::invalid_argument for non-finite values.
  static Expr number(double value);
  static Expr variable();
  static Expr pi();
  static Expr negate(Expr operand);
  static Expr call(Function fn, Expr argument);
  /// Pow requires a constant exponent (no occurrence of `s`).
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  const ast::Node& node() const;

  /// True when the tree does not reference `s`.
  bool is_constant() const;

  /// Fully parenthesized text that parses back to an identical tree.
  std::string to_string() const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ast::Node> node);
  std::shared_ptr<const ast::Node> node_;
};

namespace ast {
struct Number {
  double value;
};
struct Variable {};
struct Pi {};
struct Negate {
  Expr operand;
};
struct Call {
  Function fn;
  Expr argument;
};
struct Binary {
  BinaryOp op;
  Expr lhs;
  Expr rhs;
};
}  // namespace ast

/// Parses the expression DSL. Throws ParseError / UnknownIdentifier.
Expr parse(std::string_view text);

/// Value and exact derivatives of orders 1..3 at `s`. Throws DomainError.
Jet3 eval_jet(const Expr& e, double s);

/// Value only.
double eval(const Expr& e, double s);

}  // namespace ruledgeo
