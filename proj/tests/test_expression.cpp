#include "doctest.h"

#include "bubbletower/expression.hpp"

using namespace bubbletower;

namespace {
Vector point4(double a, double b, double c, double d) {
  Vector x(4);
  x << a, b, c, d;
  return x;
}
}  // namespace

TEST_CASE("parses and evaluates rational expressions") {
  auto e = parse_expression("2 + x4", 4);
  CHECK(e->eval(point4(0, 0, 0, 1)) == doctest::Approx(3.0));
  CHECK(e->eval(point4(1, 0, 0, 0)) == doctest::Approx(2.0));

  auto f = parse_expression("(x1 + 2*x2)^3 / (4 - x3) - 1.5e-1", 4);
  const Vector x = point4(0.3, -0.2, 0.5, 0.0);
  const double want = std::pow(0.3 - 0.4, 3) / 3.5 - 0.15;
  CHECK(f->eval(x) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("trailing operator reports its position") {
  try {
    parse_expression("2 + x4 +", 4);
    FAIL("expected ParseError");
  } catch (const ParseError& err) {
    CHECK(err.position() == 8);
  }
}

TEST_CASE("coordinate index beyond the ambient dimension is rejected") {
  CHECK_THROWS_AS(parse_expression("x5", 4), ParseError);
  CHECK_NOTHROW(parse_expression("x5", 5));
  CHECK_THROWS_AS(parse_expression("x0", 4), ParseError);
}

TEST_CASE("malformed inputs") {
  CHECK_THROWS_AS(parse_expression("", 4), ParseError);
  CHECK_THROWS_AS(parse_expression("2 + (x1", 4), ParseError);
  CHECK_THROWS_AS(parse_expression("2 ** x1", 4), ParseError);
  CHECK_THROWS_AS(parse_expression("x1^x2", 4), ParseError);
  CHECK_THROWS_AS(parse_expression("2 3", 4), ParseError);
}

TEST_CASE("division by zero raises EvalError") {
  auto e = parse_expression("1 / x1", 4);
  CHECK_THROWS_AS(e->eval(point4(0, 1, 0, 0)), EvalError);
  CHECK(e->eval(point4(0.5, 0, 0, 0)) == doctest::Approx(2.0));
}

TEST_CASE("symbolic derivatives match finite differences") {
  auto e = parse_expression("(1 + x1*x2 - x4^2)/(3 + x3) + x2^3", 4);
  const Vector x = point4(0.4, -0.7, 0.2, 0.5);
  const double h = 1e-6;
  for (int i = 0; i < 4; ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    const double fd = (e->eval(xp) - e->eval(xm)) / (2 * h);
    CHECK(e->derivative(i)->eval(x) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("negative exponents differentiate correctly") {
  auto e = parse_expression("x1^-2", 2);
  Vector x(2);
  x << 2.0, 0.0;
  CHECK(e->eval(x) == doctest::Approx(0.25));
  CHECK(e->derivative(0)->eval(x) == doctest::Approx(-2.0 * std::pow(2.0, -3.0)));
}
