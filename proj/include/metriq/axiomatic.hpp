#pragma once

// The axiomatic local metric derivative. It is defined on generalized power
// series through the power rule
//
//   D^alpha (t - a)^nu = Gamma(1 + nu) / Gamma(1 + nu - alpha) (t - a)^(nu - alpha),
//
// extended by linearity, with constants mapped to zero. The Leibniz and chain
// rules are not exact for alpha < 1; the defect functions below measure by how
// much they fail.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "metriq/error.hpp"
#include "metriq/expr.hpp"
#include "metriq/series.hpp"
#include "metriq/specfun.hpp"

namespace metriq {

inline void validate_order(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError(std::string(who) + ": alpha must lie in (0, 1]");
}

namespace detail {

inline long double power_rule_ratio(exponent_t nu, double alpha) {
  if (alpha == 1.0) return nu;
  const double num_arg = static_cast<double>(1.0L + nu);
  const double den_arg = static_cast<double>(1.0L + nu - alpha);
  if (detail::is_nonpositive_integer(den_arg)) {
    throw PoleError("power rule: Gamma pole at 1 + nu - alpha = " + detail::format_number(den_arg));
  }
  if (num_arg <= kGammaArgumentLimit && std::fabs(den_arg) <= kGammaArgumentLimit) {
    return static_cast<long double>(gamma_function(num_arg)) / static_cast<long double>(gamma_function(den_arg));
  }
  return std::exp(static_cast<long double>(log_gamma(num_arg)) - log_gamma(den_arg));
}

}  // namespace detail

// Gamma(1 + nu) / Gamma(1 + nu - alpha). At alpha = 1 this is nu exactly.
[[nodiscard]] inline double power_rule_coefficient(exponent_t nu, double alpha) {
  return static_cast<double>(detail::power_rule_ratio(nu, alpha));
}

// Term-wise D^alpha. Exponent-zero terms vanish; output terms whose exponent
// drops below zero are kept (see GeneralizedPowerSeries::has_singular_terms).
[[nodiscard]] inline GeneralizedPowerSeries d_alpha(const GeneralizedPowerSeries& s, double alpha) {
  validate_order(alpha, "d_alpha");
  std::vector<PowerTerm> out;
  out.reserve(s.size());
  for (const auto& t : s.terms()) {
    if (t.exponent < 0.0L) throw DomainError("d_alpha: input exponents must be >= 0");
    if (t.exponent == 0.0L) continue;
    const long double ratio = detail::power_rule_ratio(t.exponent, alpha);
    const double c = static_cast<double>(t.coefficient * ratio);
    out.push_back({c, t.exponent - static_cast<exponent_t>(alpha)});
  }
  return {s.offset(), std::move(out)};
}

// Truncated E_alpha(lambda x^alpha) = sum_{k < n} lambda^k x^(alpha k) / Gamma(1 + alpha k).
[[nodiscard]] inline GeneralizedPowerSeries ml_series(double alpha, double lambda, int n_terms) {
  validate_order(alpha, "ml_series");
  if (n_terms < 2) throw DomainError("ml_series: n_terms must be >= 2");
  if (static_cast<std::size_t>(n_terms) > GeneralizedPowerSeries::kMaxTerms) {
    throw SeriesBlowupError("ml_series: n_terms exceeds 512");
  }
  std::vector<PowerTerm> terms;
  terms.reserve(static_cast<std::size_t>(n_terms));
  for (int k = 0; k < n_terms; ++k) {
    const exponent_t nu = static_cast<exponent_t>(alpha) * k;
    const double arg = static_cast<double>(1.0L + nu);
    double c;
    if (arg <= kGammaArgumentLimit) {
      c = static_cast<double>(static_cast<long double>(std::pow(lambda, k)) /
                              static_cast<long double>(gamma_function(arg)));
    } else if (lambda == 0.0) {
      c = 0.0;
    } else {
      const double sign = (lambda < 0.0 && (k % 2) == 1) ? -1.0 : 1.0;
      c = sign * std::exp(k * std::log(std::fabs(lambda)) - log_gamma(arg));
    }
    terms.push_back({c, nu});
  }
  return {0.0, std::move(terms)};
}

// Largest |coefficient| difference between two series after matching terms by
// exponent; a term present on one side only counts in full.
[[nodiscard]] inline double max_coefficient_mismatch(const GeneralizedPowerSeries& l,
                                                     const GeneralizedPowerSeries& r) {
  double worst = 0.0;
  const auto& a = l.terms();
  const auto& b = r.terms();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].exponent < b[j].exponent)) {
      worst = std::max(worst, std::fabs(a[i++].coefficient));
    } else if (i == a.size() || b[j].exponent < a[i].exponent) {
      worst = std::max(worst, std::fabs(b[j++].coefficient));
    } else {
      worst = std::max(worst, std::fabs(a[i++].coefficient - b[j++].coefficient));
    }
  }
  return worst;
}

// Compares D^alpha of the n-term Mittag-Leffler series with lambda times the
// (n-1)-term series. The two agree exactly in exact arithmetic, so the result
// measures floating-point error only.
[[nodiscard]] inline double eigen_check(double alpha, double lambda, int n_terms) {
  if (n_terms < 3) throw DomainError("eigen_check: n_terms must be >= 3");
  const GeneralizedPowerSeries lhs = d_alpha(ml_series(alpha, lambda, n_terms), alpha);
  const GeneralizedPowerSeries rhs = lambda * ml_series(alpha, lambda, n_terms - 1);
  return max_coefficient_mismatch(lhs, rhs);
}

// D^alpha(x^mu x^nu) minus the Leibniz expansion (D^alpha x^mu) x^nu + x^mu (D^alpha x^nu).
[[nodiscard]] inline double leibniz_defect(double mu, double nu, double alpha, double x) {
  validate_order(alpha, "leibniz_defect");
  if (!(mu > 0.0) || !(nu > 0.0)) throw DomainError("leibniz_defect: exponents must be > 0");
  if (!(x > 0.0)) throw DomainError("leibniz_defect: x must be > 0");
  const exponent_t m = mu, n = nu;
  const double coeff = power_rule_coefficient(m + n, alpha) - power_rule_coefficient(m, alpha) -
                       power_rule_coefficient(n, alpha);
  return coeff * std::pow(x, mu + nu - alpha);
}

inline constexpr int kChainTaylorOrder = 6;

// Taylor composition of f around w(x0): sum_j f^(j)(w0)/j! (w - w0)^j.
[[nodiscard]] inline GeneralizedPowerSeries taylor_compose(const ExprAst& f, const GeneralizedPowerSeries& w,
                                                           double x0, int order = kChainTaylorOrder) {
  const double w0 = w(x0);
  const std::vector<double> coeffs = taylor_coefficients(f, w0, order);
  const GeneralizedPowerSeries delta = w - constant_series(w0, w.offset());

  GeneralizedPowerSeries result = constant_series(coeffs[0], w.offset());
  GeneralizedPowerSeries power = constant_series(1.0, w.offset());
  for (int j = 1; j <= order; ++j) {
    power = power * delta;
    result = result + coeffs[static_cast<std::size_t>(j)] * power;
  }
  return result;
}

// D^alpha(f o w)(x0) - f'(w(x0)) (D^alpha w)(x0), with D^alpha(f o w) taken on
// the Taylor composition above.
[[nodiscard]] inline double chain_defect(const ExprAst& f, const GeneralizedPowerSeries& w, double alpha,
                                         double x0, int order = kChainTaylorOrder) {
  validate_order(alpha, "chain_defect");
  if (!(x0 > w.offset())) throw DomainError("chain_defect: x0 must exceed the series offset");
  if (!(x0 > 0.0)) throw DomainError("chain_defect: x0 must be > 0");
  const GeneralizedPowerSeries composed = taylor_compose(f, w, x0, order);
  const double lhs = d_alpha(composed, alpha)(x0);
  const double outer_slope = diff(f)(w(x0));
  const double rhs = outer_slope * d_alpha(w, alpha)(x0);
  return lhs - rhs;
}

}  // namespace metriq
