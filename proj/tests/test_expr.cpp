#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <string>

#include "metriq/expr.hpp"

using namespace metriq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Random expression that is finite for every x > 0: divisions, logarithms and
// roots only ever see arguments >= 1.
std::string random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 11 : 1);
  std::uniform_real_distribution<double> num(0.5, 2.0);
  auto c = [&] {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", num(rng));
    return std::string(buf);
  };
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return c();
    case 2: return "(" + sub() + " + " + sub() + ")";
    case 3: return "(" + sub() + " - " + sub() + ")";
    case 4: return sub() + "*" + sub();
    case 5: {
      const std::string d = sub();
      return "(" + sub() + ")/(" + d + "*" + d + " + 1)";
    }
    case 6: return "sin(" + sub() + ")";
    case 7: return "cos(" + sub() + ")";
    case 8: return "exp(sin(" + sub() + "))";
    case 9: {
      const std::string u = sub();
      return "ln(" + u + "*" + u + " + 1)";
    }
    case 10: {
      const std::string u = sub();
      return "sqrt(" + u + "*" + u + " + 1)";
    }
    default: return "x^" + c();
  }
}

}  // namespace

TEST_CASE("parse and evaluate", "[parse]") {
  CHECK(parse("x^2 + 3*x")(2.0) == 10.0);
  CHECK_THAT(parse("exp(x^0.5)")(1.0), WithinRel(std::exp(1.0), 1e-15));
  CHECK(parse("2^3^2")(0.0) == 512.0);
  CHECK(parse("8/4/2")(0.0) == 1.0);
  CHECK(parse("pow(x, 3)")(2.0) == 8.0);
  CHECK(parse("  sqrt( 16 ) ")(0.0) == 4.0);
  CHECK(parse("-x^2")(3.0) == 9.0);
  CHECK(parse("-(x^2)")(3.0) == -9.0);
  CHECK(parse("1.5e1")(0.0) == 15.0);
}

TEST_CASE("syntax errors carry offsets", "[parse]") {
  try {
    (void)parse("sin(");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  try {
    (void)parse("x + * 2");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 4);
  }
  CHECK_THROWS_AS(parse(""), SyntaxError);
  CHECK_THROWS_AS(parse("(x"), SyntaxError);
  CHECK_THROWS_AS(parse("x)"), SyntaxError);
  CHECK_THROWS_AS(parse("pow(x)"), SyntaxError);
  CHECK_THROWS_AS(parse(std::string(5000, 'x')), SyntaxError);
  try {
    (void)parse("2*tan(x)");
    FAIL("expected an unknown identifier error");
  } catch (const UnknownIdentifierError& e) {
    CHECK(e.offset() == 2);
    CHECK(e.kind() == ErrorKind::UnknownIdentifier);
  }
}

TEST_CASE("evaluation domain errors", "[eval]") {
  CHECK_THROWS_AS(parse("ln(x)")(0.0), DomainError);
  CHECK_THROWS_AS(parse("sqrt(x)")(-1.0), DomainError);
  CHECK_THROWS_AS(parse("1/x")(0.0), DomainError);
  CHECK_THROWS_AS(parse("x^0.5")(-4.0), DomainError);
  CHECK(parse("x^3")(-2.0) == -8.0);
  CHECK_THROWS_AS(parse("exp(x)")(1000.0), DomainError);
}

TEST_CASE("symbolic derivative", "[diff]") {
  CHECK(diff(parse("x^3"))(2.0) == 12.0);
  CHECK(diff(parse("exp(x)"))(0.0) == 1.0);
  const ExprAst f = parse("sin(x^2)");
  const double h = 1e-5, x = 0.7;
  const double fd = (f(x + h) - f(x - h)) / (2 * h);
  CHECK_THAT(diff(f)(x), WithinAbs(fd, 1e-8));
  CHECK(diff(parse("5"))(1.0) == 0.0);
  CHECK(diff(parse("5")).is_constant(0.0));
  CHECK_THAT(diff(parse("2^x"))(1.0), WithinRel(2.0 * std::log(2.0), 1e-15));
  CHECK_THAT(diff(parse("x^x"))(2.0), WithinRel(4.0 * (std::log(2.0) + 1.0), 1e-14));
  CHECK_THAT(diff(parse("pow(x, 0.5)"))(4.0), WithinRel(0.25, 1e-15));
  CHECK_THAT(diff(parse("ln(x)/sqrt(x)"))(2.0),
             WithinRel((1.0 - 0.5 * std::log(2.0)) / std::pow(2.0, 1.5), 1e-14));
}

TEST_CASE("print then parse is structurally idempotent", "[print]") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const ExprAst a = parse(random_expr(rng, 4));
    const ExprAst b = parse(to_string(a));
    INFO(to_string(a));
    CHECK(structurally_equal(a, b));
    CHECK(to_string(b) == to_string(a));
  }
  CHECK(to_string(parse("-3 + x")) == "((-3)+x)");
}

TEST_CASE("derivative agrees with central differences", "[diff]") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> xs(0.3, 3.0);
  int failures = 0;
  for (int i = 0; i < 100; ++i) {
    const ExprAst f = parse(random_expr(rng, 3));
    const ExprAst fp = diff(f);
    for (int k = 0; k < 20; ++k) {
      const double x = xs(rng);
      const double h = 1e-5 * std::max(1.0, x);
      const double fd = (f(x + h) - f(x - h)) / (2 * h);
      const double exact = fp(x);
      if (std::fabs(exact - fd) > std::max(1e-7, 1e-6 * std::fabs(exact))) {
        ++failures;
        UNSCOPED_INFO(to_string(f) << " at " << x << ": " << exact << " vs " << fd);
      }
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("composition and Taylor coefficients", "[compose]") {
  const ExprAst g = compose(parse("sin(x)"), parse("x^2"));
  CHECK(g(1.3) == std::sin(1.3 * 1.3));
  const auto c = taylor_coefficients(parse("exp(x)"), 0.0, 5);
  REQUIRE(c.size() == 6);
  CHECK(c[0] == 1.0);
  CHECK_THAT(c[3], WithinRel(1.0 / 6.0, 1e-15));
  CHECK_THAT(c[5], WithinRel(1.0 / 120.0, 1e-15));
}

TEST_CASE("constant folding only", "[build]") {
  using namespace expr;
  CHECK(add(constant(2), constant(3)).is_constant(5.0));
  CHECK(structurally_equal(mul(constant(1), variable()), variable()));
  CHECK(mul(constant(0), variable()).is_constant(0.0));
  CHECK_FALSE(sub(variable(), variable()).is_constant());
}
