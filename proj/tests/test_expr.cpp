#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <variant>

#include "ruledgeo/errors.hpp"
#include "ruledgeo/expr.hpp"

using namespace ruledgeo;

namespace {

void check_jet(const Jet3& j, double v, double d1, double d2, double d3, double tol = 1e-14) {
  CHECK(j.value == doctest::Approx(v).epsilon(tol));
  CHECK(j.d1 == doctest::Approx(d1).epsilon(tol));
  CHECK(j.d2 == doctest::Approx(d2).epsilon(tol));
  CHECK(j.d3 == doctest::Approx(d3).epsilon(tol));
}

// Random smooth expressions over a domain where every node is defined.
Expr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 8);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return Expr::variable();
    case 1: return Expr::number(std::round(coef(rng) * 100) / 100);
    case 2: return Expr::binary(BinaryOp::Add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 3: return Expr::binary(BinaryOp::Sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return Expr::binary(BinaryOp::Mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return Expr::call(Function::Sin, random_expr(rng, depth - 1));
    case 6: return Expr::call(Function::Atan, random_expr(rng, depth - 1));
    case 7:
      return Expr::binary(BinaryOp::Pow, random_expr(rng, depth - 1),
                          Expr::number(std::uniform_int_distribution<int>(2, 3)(rng)));
    default: return Expr::negate(Expr::call(Function::Cos, random_expr(rng, depth - 1)));
  }
}

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const Expr sq = parse("s^2");
  REQUIRE(std::holds_alternative<ast::Binary>(sq.node()));
  const auto& b = std::get<ast::Binary>(sq.node());
  CHECK(b.op == BinaryOp::Pow);
  CHECK(std::holds_alternative<ast::Variable>(b.lhs.node()));
  CHECK(std::get<ast::Number>(b.rhs.node()).value == 2.0);

  const Expr at = parse("atan(s)");
  REQUIRE(std::holds_alternative<ast::Call>(at.node()));
  CHECK(std::get<ast::Call>(at.node()).fn == Function::Atan);

  const Expr h = parse("3/5*cos(s)");
  const auto& mul = std::get<ast::Binary>(h.node());
  CHECK(mul.op == BinaryOp::Mul);
  CHECK(std::get<ast::Binary>(mul.lhs.node()).op == BinaryOp::Div);
  CHECK(std::get<ast::Call>(mul.rhs.node()).fn == Function::Cos);
}

TEST_CASE("precedence and associativity") {
  CHECK(eval(parse("2+3*4"), 0) == 14);
  CHECK(eval(parse("2^3^2"), 0) == 512);
  CHECK(eval(parse("-2^2"), 0) == -4);
  CHECK(eval(parse("2^-1"), 0) == 0.5);
  CHECK(eval(parse("8/2/2"), 0) == 2);
  CHECK(eval(parse("10-4-3"), 0) == 3);
  CHECK(eval(parse("  ( s + 1 ) * 2 "), 1.5) == 5);
  CHECK(eval(parse("pi"), 0) == std::numbers::pi);
  CHECK(eval(parse("1.5e2 + .5"), 0) == 150.5);
}

TEST_CASE("syntax errors carry an offset and expected tokens") {
  try {
    parse("sin(");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(!e.expected().empty());
  }
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("s +"), ParseError);
  CHECK_THROWS_AS(parse("(s"), ParseError);
  CHECK_THROWS_AS(parse("s s"), ParseError);
  CHECK_THROWS_AS(parse("s^s"), ParseError);
  CHECK_THROWS_AS(parse("2 $ 3"), ParseError);
}

TEST_CASE("unknown identifiers are reported by name") {
  try {
    parse("1 + t");
    FAIL("expected UnknownIdentifier");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "t");
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse("sinh(s)"), UnknownIdentifier);
}

TEST_CASE("jets of elementary functions") {
  check_jet(eval_jet(parse("s^2"), 3), 9, 6, 2, 0);
  check_jet(eval_jet(parse("sin(s)"), 0), 0, 1, 0, -1);
  check_jet(eval_jet(parse("atan(s)"), 1), std::numbers::pi / 4, 0.5, -0.5, 0.5);
  check_jet(eval_jet(parse("exp(2*s)"), 0), 1, 2, 4, 8);
  check_jet(eval_jet(parse("log(s)"), 1), 0, 1, -1, 2);
  check_jet(eval_jet(parse("sqrt(s)"), 4), 2, 0.25, -1.0 / 32, 3.0 / 256);
  check_jet(eval_jet(parse("1/s"), 2), 0.5, -0.25, 0.25, -0.375);
  check_jet(eval_jet(parse("tan(s)"), 0), 0, 1, 0, 2);
  check_jet(eval_jet(parse("abs(s)"), -2), 2, -1, 0, 0);
  check_jet(eval_jet(parse("s^3"), 0), 0, 0, 0, 6);
  check_jet(eval_jet(parse("s^0.5"), 4), 2, 0.25, -1.0 / 32, 3.0 / 256);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval(parse("log(s)"), 0), DomainError);
  CHECK_THROWS_AS(eval(parse("log(s)"), -1), DomainError);
  CHECK_THROWS_AS(eval(parse("sqrt(s)"), -1), DomainError);
  CHECK_THROWS_AS(eval(parse("1/s"), 0), DomainError);
  CHECK_THROWS_AS(eval(parse("s^-1"), 0), DomainError);
  CHECK_THROWS_AS(eval(parse("s^0.5"), -1), DomainError);
  CHECK(eval(parse("sqrt(0)"), 3) == 0);
  try {
    eval(parse("1 + log(s - 2)"), 1);
    FAIL("expected DomainError");
  } catch (const DomainError& e) {
    CHECK(e.parameter() == 1);
    CHECK(e.subexpression().find("log") != std::string::npos);
  }
}

TEST_CASE("Jet3 arithmetic follows the Leibniz rule") {
  const Jet3 a{1.5, -0.5, 2.0, 0.25};
  const Jet3 b{-2.0, 3.0, -1.0, 4.0};
  const Jet3 p = a * b;
  CHECK(p.value == doctest::Approx(a.value * b.value));
  CHECK(p.d1 == doctest::Approx(a.d1 * b.value + a.value * b.d1));
  CHECK(p.d2 == doctest::Approx(a.d2 * b.value + 2 * a.d1 * b.d1 + a.value * b.d2));
  CHECK(p.d3 == doctest::Approx(a.d3 * b.value + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.value * b.d3));
}

TEST_CASE("property: jets match finite differences on random expressions") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> point(-1.5, 1.5);
  const double h = 1e-4;
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = random_expr(rng, 4);
    const double s = point(rng);
    const Jet3 j = eval_jet(e, s);
    // Derivatives by differencing the next-lower jet component keeps the
    // truncation error at O(h^2) for every order.
    const Jet3 jp = eval_jet(e, s + h), jm = eval_jet(e, s - h);
    const double fd1 = (jp.value - jm.value) / (2 * h);
    const double fd2 = (jp.d1 - jm.d1) / (2 * h);
    const double fd3 = (jp.d2 - jm.d2) / (2 * h);
    auto rel = [](double exact, double approx) {
      return std::abs(exact - approx) / std::max(1.0, std::abs(exact));
    };
    CHECK(rel(j.d1, fd1) < 1e-5);
    CHECK(rel(j.d2, fd2) < 1e-5);
    CHECK(rel(j.d3, fd3) < 1e-5);
    // Second difference of the value itself, the plain textbook oracle.
    const double fd2_plain = (jp.value - 2 * j.value + jm.value) / (h * h);
    CHECK(rel(j.d2, fd2_plain) < 1e-5 * std::max(1.0, std::abs(j.value)));
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("property: printing then parsing reproduces the tree") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 500; ++trial) {
    const Expr e = random_expr(rng, 5);
    const Expr back = parse(e.to_string());
    CHECK(back == e);
    CHECK(back.to_string() == e.to_string());
  }
  for (const char* text : {"3/5*cos(s)", "-s^2", "atan(s)", "-(-(s))", "1e-300*s", "pi*abs(s-1)"}) {
    const Expr e = parse(text);
    CHECK(parse(e.to_string()) == e);
  }
}

TEST_CASE("constant detection") {
  CHECK(parse("2*pi + sin(3)").is_constant());
  CHECK_FALSE(parse("2*s").is_constant());
  CHECK(eval_jet(parse("cos(1)^2"), 5.0).is_constant());
  CHECK_THROWS_AS(Expr::binary(BinaryOp::Pow, Expr::number(2), Expr::variable()), std::invalid_argument);
}
