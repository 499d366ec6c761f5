#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "metriq/localops.hpp"
#include "metriq/loglog.hpp"

using namespace metriq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FractalityParams with_alpha(double a) {
  FractalityParams p;
  p.alpha = a;
  return p;
}

FractalityParams with_q(double q) {
  FractalityParams p;
  p.q = q;
  return p;
}

// Random polynomial of degree <= 4 with coefficients in [-2, 2].
std::string random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%.4f*x^4 + %.4f*x^3 + %.4f*x^2 + %.4f*x + %.4f", c(rng), c(rng), c(rng), c(rng),
                c(rng));
  return buf;
}

}  // namespace

TEST_CASE("operator names round trip", "[localops]") {
  for (OperatorKind k : kAllOperatorKinds) CHECK(operator_kind_from_string(to_string(k)) == k);
  CHECK_FALSE(operator_kind_from_string("riemann").has_value());
}

TEST_CASE("multipliers", "[localops]") {
  CHECK(multiplier(OperatorKind::Conformable, with_alpha(1.0), 7.0) == 1.0);
  CHECK(multiplier(OperatorKind::QDeriv, with_q(0.5), 2.0) == 2.0);
  FractalityParams hfc;
  hfc.zeta = 0.8;
  CHECK_THAT(multiplier(OperatorKind::HausdorffFractalContinuum, hfc, 1.0), WithinRel(std::pow(2.0, 0.2), 1e-15));
  hfc.c1 = 2.0;
  CHECK_THAT(multiplier(OperatorKind::HausdorffFractalContinuum, hfc, 1.0), WithinRel(std::pow(2.0, 0.2) / 2, 1e-15));
  CHECK_THAT(multiplier(OperatorKind::HausdorffScale, with_alpha(0.5), 4.0), WithinRel(4.0, 1e-15));
  CHECK_THROWS_AS(multiplier(OperatorKind::Conformable, with_alpha(0.5), 0.0), DomainError);
  CHECK_THROWS_AS(multiplier(OperatorKind::Conformable, with_alpha(1.5), 1.0), DomainError);
  CHECK_THROWS_AS(multiplier(OperatorKind::QDeriv, with_q(2.0), 1.0), DomainError);
}

TEST_CASE("closed forms", "[localops]") {
  CHECK_THAT(apply_closed(OperatorKind::Conformable, with_alpha(0.5), parse("x"), 4.0), WithinRel(2.0, 1e-15));
  const ExprAst f = parse("sin(x)*exp(x)");
  CHECK_THAT(apply_closed(OperatorKind::QDeriv, with_q(1.0), f, 1.3), WithinRel(diff(f)(1.3), 1e-15));
  CHECK_THAT(apply_closed(OperatorKind::HausdorffScale, with_alpha(0.5), parse("exp(x^0.5)"), 4.0),
             WithinRel(std::exp(2.0), 1e-10));
}

TEST_CASE("limit definitions", "[localops][limit]") {
  CHECK_THAT(apply_limit(OperatorKind::Conformable, with_alpha(0.5), parse("x"), 4.0, 1e-6), WithinAbs(2.0, 1e-5));
  CHECK_THAT(apply_limit_extrapolated(OperatorKind::Katugampola, with_alpha(1.0), parse("x"), 2.0, 1e-2),
             WithinAbs(1.0, 1e-9));
  CHECK_THAT(apply_limit(OperatorKind::QDeriv, with_q(0.5), parse("x^2"), 1.0, 1e-6), WithinAbs(3.0, 1e-4));
  CHECK_THROWS_AS(apply_limit(OperatorKind::HausdorffScale, with_alpha(0.5), parse("x"), 1.0, 1e-3), DomainError);
  CHECK_THROWS_AS(apply_limit(OperatorKind::Conformable, with_alpha(0.5), parse("x"), 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(deformed_difference(2.0, 3.0, 1.0), DomainError);
}

TEST_CASE("limit quotients converge at first order", "[localops][limit]") {
  const ExprAst f = parse("exp(x)*sin(x) + x^3");
  const double x = 1.7;
  for (OperatorKind k : {OperatorKind::Conformable, OperatorKind::Katugampola, OperatorKind::QDeriv}) {
    FractalityParams p;
    p.alpha = 0.6;
    p.q = 0.7;
    const double exact = apply_closed(k, p, f, x);
    std::vector<double> eps, err;
    double e = 1e-2;
    for (int i = 0; i < 6; ++i, e *= 0.5) {
      eps.push_back(e);
      err.push_back(std::fabs(apply_limit(k, p, f, x, e) - exact));
    }
    const LoglogFit fit = fit_loglog(eps, err);
    INFO(to_string(k));
    CHECK(fit.slope >= 0.9);
    CHECK_THAT(apply_limit_extrapolated(k, p, f, x, 1e-2), WithinRel(exact, 1e-8));
  }
}

TEST_CASE("classical reduction at order 1", "[localops]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> xs(0.1, 4.0);
  const FractalityParams classical;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ExprAst f = parse(random_polynomial(rng));
    const double x = xs(rng);
    for (OperatorKind k : kAllOperatorKinds) {
      worst = std::max(worst, std::fabs(apply_closed(k, classical, f, x) - diff(f)(x)));
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("Leibniz and chain rules hold for multiplier operators", "[localops]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> xs(0.2, 3.0);
  FractalityParams p;
  p.alpha = 0.7;
  p.zeta = 0.8;
  p.q = 0.6;
  p.l0 = 1.5;
  double leibniz = 0.0, chain = 0.0;
  for (int i = 0; i < 50; ++i) {
    const ExprAst f = parse(random_polynomial(rng));
    const ExprAst g = parse(random_polynomial(rng));
    const ExprAst outer = parse("sin(x) + x^2");
    const double x = xs(rng);
    for (OperatorKind k : kAllOperatorKinds) {
      const double lhs = apply_closed(k, p, expr::mul(f, g), x);
      const double rhs = g(x) * apply_closed(k, p, f, x) + f(x) * apply_closed(k, p, g, x);
      leibniz = std::max(leibniz, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
      const double c_lhs = apply_closed(k, p, compose(outer, g), x);
      const double c_rhs = diff(outer)(g(x)) * apply_closed(k, p, g, x);
      chain = std::max(chain, std::fabs(c_lhs - c_rhs) / std::max(1.0, std::fabs(c_lhs)));
    }
  }
  CHECK(leibniz <= 1e-10);
  CHECK(chain <= 1e-10);
}

TEST_CASE("parameter bridge", "[bridge]") {
  CHECK(bridge_params(1.0, 3.7) == 1.0);
  CHECK_THAT(bridge_params(0.9, 1.0), WithinRel(0.9, 1e-15));
  for (double q : {0.3, 0.9, 1.2}) {
    for (double l0 : {0.5, 1.0, 2.0}) CHECK_THAT(bridge_params(bridge_params_inv(q, l0), l0), WithinRel(q, 1e-14));
  }
  CHECK_THROWS_AS(bridge_params(0.9, 0.0), DomainError);
}

// With q tied to (zeta, l0) the two multipliers differ by
// (1 - zeta) (x/l0 - ln(1 + x/l0)) to first order, i.e. linearly in 1 - zeta.
TEST_CASE("bridged multipliers agree to first order in 1 - zeta", "[bridge]") {
  for (double l0 : {0.5, 1.0, 2.0}) {
    for (double x : {0.5, 1.0, 2.0}) {
      std::vector<double> d, diffs;
      for (int k = 3; k <= 9; ++k) {
        const double zeta = 1.0 - std::ldexp(1.0, -k);
        const FractalityParams p = bridged_params(zeta, l0);
        d.push_back(1.0 - zeta);
        diffs.push_back(std::fabs(multiplier(OperatorKind::QDeriv, p, x) -
                                  multiplier(OperatorKind::HausdorffFractalContinuum, p, x)));
      }
      const double r = x / l0;
      const double leading = r - std::log1p(r);
      CHECK_THAT(diffs.back() / d.back(), WithinRel(leading, 1e-2));
      CHECK_THAT(fit_loglog(d, diffs).slope, WithinAbs(1.0, 0.03));
    }
  }
}
