#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "metriq/axiomatic.hpp"
#include "metriq/loglog.hpp"

using namespace metriq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> ladder_alphas() {
  std::vector<double> out;
  for (int k = 3; k <= 9; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
  return out;
}

LoglogFit ladder_fit(const std::function<double(double)>& defect) {
  std::vector<double> xs, ys;
  for (double a : ladder_alphas()) {
    xs.push_back(1.0 - a);
    ys.push_back(std::fabs(defect(a)));
  }
  return fit_loglog(xs, ys);
}

}  // namespace

TEST_CASE("power rule", "[d_alpha]") {
  CHECK(d_alpha(constant_series(5.0), 0.7).empty());
  CHECK(d_alpha(parse_series("1@1"), 1.0) == constant_series(1.0));
  const auto d = d_alpha(parse_series("1@1"), 0.5);
  REQUIRE(d.size() == 1);
  CHECK(d.terms()[0].exponent == 0.5L);
  CHECK_THAT(d.terms()[0].coefficient, WithinRel(2.0 / std::sqrt(std::numbers::pi), 1e-14));
  CHECK_THAT(power_rule_coefficient(2.0L, 0.5), WithinRel(2.0 / gamma_function(2.5), 1e-14));
  CHECK(power_rule_coefficient(3.5L, 1.0) == 3.5);
}

TEST_CASE("d_alpha keeps singular terms and checks its inputs", "[d_alpha]") {
  const auto d = d_alpha(parse_series("1@0.25"), 0.5);
  CHECK(d.has_singular_terms());
  CHECK_THROWS_AS(d(0.0), DomainError);
  CHECK_THROWS_AS(d_alpha(parse_series("1@1"), 0.0), DomainError);
  CHECK_THROWS_AS(d_alpha(parse_series("1@1"), 1.2), DomainError);
  CHECK_THROWS_AS(d_alpha(d, 0.5), DomainError);
  const auto shifted = d_alpha(parse_series("a=2; 1@1"), 0.5);
  CHECK(shifted.offset() == 2.0);
  CHECK_THAT(shifted(3.0), WithinRel(2.0 / std::sqrt(std::numbers::pi), 1e-14));
}

TEST_CASE("linearity", "[d_alpha]") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), expo(0.0, 3.0), alpha(0.3, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    std::vector<PowerTerm> t1, t2;
    for (int k = 0; k < 4; ++k) {
      t1.push_back({coef(rng), static_cast<exponent_t>(expo(rng))});
      t2.push_back({coef(rng), static_cast<exponent_t>(expo(rng))});
    }
    const GeneralizedPowerSeries s1(0.0, t1), s2(0.0, t2);
    const double c1 = coef(rng), c2 = coef(rng), a = alpha(rng);
    worst = std::max(worst, max_coefficient_mismatch(d_alpha(c1 * s1 + c2 * s2, a),
                                                     c1 * d_alpha(s1, a) + c2 * d_alpha(s2, a)));
  }
  CHECK(worst <= 1e-13);
}

TEST_CASE("Mittag-Leffler series", "[ml_series]") {
  const auto e = ml_series(1.0, 1.0, 5);
  REQUIRE(e.size() == 5);
  const double expected[] = {1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0};
  for (int k = 0; k < 5; ++k) CHECK(e.terms()[static_cast<std::size_t>(k)].coefficient == expected[k]);
  const auto h = ml_series(0.5, 2.0, 3);
  CHECK(h.terms()[0].coefficient == 1.0);
  CHECK_THAT(h.terms()[1].coefficient, WithinRel(2.2567583341910251, 1e-14));
  CHECK_THAT(h.terms()[2].coefficient, WithinRel(4.0, 1e-15));
  CHECK_THROWS_AS(ml_series(0.5, 1.0, 1), DomainError);
  CHECK_THROWS_AS(ml_series(0.5, 1.0, 600), SeriesBlowupError);
}

TEST_CASE("eigenfunction identity", "[eigen]") {
  CHECK(eigen_check(1.0, 1.0, 10) <= 1e-13);
  CHECK(eigen_check(0.9, 1.0, 30) <= 1e-12);
  CHECK(eigen_check(0.5, -1.0, 30) <= 1e-12);
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7, 0.9, 0.99, 1.0}) {
    for (double l : {-2.0, -1.0, 1.0, 2.0}) {
      for (int n : {10, 30, 50}) worst = std::max(worst, eigen_check(a, l, n));
    }
  }
  CHECK(worst <= 1e-12);
  CHECK_THROWS_AS(eigen_check(0.5, 1.0, 2), DomainError);
}

TEST_CASE("alpha = 1 is the classical derivative", "[d_alpha]") {
  const auto s = parse_series("3@0, 2@1, -1.5@2.5, 0.25@7");
  const auto d = d_alpha(s, 1.0);
  CHECK(d == GeneralizedPowerSeries(0.0, {{2.0, 0.0L}, {-3.75, 1.5L}, {1.75, 6.0L}}));
}

TEST_CASE("Leibniz defect", "[leibniz]") {
  CHECK(leibniz_defect(1.0, 1.0, 1.0, 2.0) == 0.0);
  CHECK(leibniz_defect(0.5, 0.5, 1.0, 3.3) == 0.0);
  CHECK_THAT(leibniz_defect(1.0, 1.0, 0.95, 1.0), WithinRel(-0.09783017764492156276944, 1e-13));
  CHECK_THROWS_AS(leibniz_defect(0.0, 1.0, 0.9, 1.0), DomainError);
  CHECK_THROWS_AS(leibniz_defect(1.0, 1.0, 0.9, 0.0), DomainError);
}

TEST_CASE("Leibniz defect is first order in 1 - alpha", "[leibniz]") {
  for (auto [mu, nu] : {std::pair{1.0, 1.0}, std::pair{0.5, 1.5}, std::pair{2.0, 3.0}}) {
    const LoglogFit fit = ladder_fit([&](double a) { return leibniz_defect(mu, nu, a, 1.0); });
    INFO("mu=" << mu << " nu=" << nu);
    CHECK_THAT(fit.slope, WithinAbs(1.0, 0.05));
    CHECK(fit.r2 >= 0.98);
  }
}

TEST_CASE("chain defect", "[chain]") {
  const ExprAst exp_f = parse("exp(x)");
  const auto identity = parse_series("1@1");
  CHECK_THAT(chain_defect(exp_f, identity, 0.9, 1.0), WithinRel(-0.20464758184671993987733, 1e-10));
  CHECK_THAT(chain_defect(parse("x^2"), parse_series("1@0.5"), 0.9, 1.0),
             WithinRel(-0.13907456819537753319691, 1e-12));
  CHECK_THAT(chain_defect(parse("x^2"), parse_series("1@0.5"), 0.9, 1.0),
             WithinRel(leibniz_defect(0.5, 0.5, 0.9, 1.0), 1e-12));
  CHECK_THAT(chain_defect(parse("sin(x)"), parse_series("1@1, 0.5@2"), 1.0, 0.8), WithinAbs(0.0, 1e-8));
  CHECK_THAT(chain_defect(exp_f, identity, 1.0, 1.0), WithinAbs(0.0, 1e-8));
  CHECK_THROWS_AS(chain_defect(exp_f, parse_series("a=1; 1@1"), 0.9, 0.5), DomainError);
}

TEST_CASE("chain defect vanishes as alpha -> 1", "[chain]") {
  const ExprAst f = parse("exp(x)");
  const auto w = parse_series("1@1");
  const LoglogFit fit = ladder_fit([&](double a) { return chain_defect(f, w, a, 1.0); });
  CHECK(fit.slope >= 0.9);
  CHECK(fit.r2 >= 0.98);
}
