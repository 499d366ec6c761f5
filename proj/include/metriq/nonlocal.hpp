#pragma once

// Nonlocal fractional derivatives with lower terminal 0, used as reference
// oracles for the local operators.

#include <algorithm>
#include <cmath>
#include <string>

#include "metriq/error.hpp"
#include "metriq/expr.hpp"
#include "metriq/localops.hpp"
#include "metriq/quadrature.hpp"
#include "metriq/specfun.hpp"
#include "metriq/summation.hpp"

namespace metriq {

namespace detail {

// Quintic smoothstep s^3 (10 - 15 s + 6 s^2) and its derivative. Used to grade
// the Caputo integration variable toward both ends of the interval.
inline double smoothstep(double s) noexcept { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
inline double smoothstep_slope(double s) noexcept {
  const double t = s * (1.0 - s);
  return 30.0 * t * t;
}

}  // namespace detail

// Caputo derivative (1/Gamma(1-alpha)) int_0^x f'(tau) (x - tau)^(-alpha) dtau.
//
// With u = (x - tau)^(1-alpha) the kernel disappears:
//   (1/Gamma(2-alpha)) int_0^{x^(1-alpha)} f'(x - u^(1/(1-alpha))) du.
// The u interval is further mapped through a smoothstep so that an integrable
// singularity of f' at tau = 0 is flattened before adaptive Gauss-Legendre.
[[nodiscard]] inline double caputo(const ExprAst& f, double alpha, double x, const QuadratureSpec& spec = {}) {
  if (alpha == 1.0) throw DomainError("caputo: alpha = 1 is the classical derivative; use diff");
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("caputo: alpha must lie in (0, 1)");
  if (!(x > 0.0)) throw DomainError("caputo: x must be > 0");

  const ExprAst fp = diff(f);
  if (fp.is_constant(0.0)) return 0.0;

  const double p = 1.0 / (1.0 - alpha);
  const double u_end = std::pow(x, 1.0 - alpha);
  auto integrand = [&](double s) {
    // tau = x (1 - (1 - w)^p), w = 1 - smoothstep(s) = smoothstep(1 - s).
    const double w = detail::smoothstep(1.0 - s);
    const double tau = -x * std::expm1(p * std::log1p(-w));
    return fp(tau) * u_end * detail::smoothstep_slope(s);
  };
  const QuadratureResult r = integrate_adaptive(integrand, 0.0, 1.0, spec);
  return r.value / gamma_function(2.0 - alpha);
}

inline constexpr double kGrunwaldMaxSteps = 1e6;

// Grunwald-Letnikov sum h^(-alpha) sum_{j=0}^{floor(x/h)} (-1)^j C(alpha, j) f(x - j h).
// This converges to the Riemann-Liouville derivative, which differs from
// Caputo by f(0) x^(-alpha) / Gamma(1 - alpha).
[[nodiscard]] inline double grunwald_letnikov(const ExprAst& f, double alpha, double x, double h) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("grunwald_letnikov: alpha must lie in (0, 1]");
  if (!(x > 0.0)) throw DomainError("grunwald_letnikov: x must be > 0");
  if (!(h > 0.0)) throw DomainError("grunwald_letnikov: h must be > 0");
  if (x / h > kGrunwaldMaxSteps) throw DomainError("grunwald_letnikov: x/h must not exceed 1e6");

  const auto n = static_cast<long>(std::floor(x / h));
  CompensatedSum acc;
  double weight = 1.0;  // (-1)^j C(alpha, j)
  for (long j = 0; j <= n; ++j) {
    if (j > 0) weight *= (static_cast<double>(j) - 1.0 - alpha) / static_cast<double>(j);
    if (weight == 0.0) break;  // integer alpha: the binomial terminates
    const double t = std::max(0.0, x - static_cast<double>(j) * h);
    acc += weight * f(t);
  }
  return acc.value() / std::pow(h, alpha);
}

// 2 GL(h/2) - GL(h): removes the O(h) bias of the plain sum.
[[nodiscard]] inline double grunwald_letnikov_extrapolated(const ExprAst& f, double alpha, double x, double h) {
  return 2.0 * grunwald_letnikov(f, alpha, x, 0.5 * h) - grunwald_letnikov(f, alpha, x, h);
}

// |local operator - Caputo| at x.
[[nodiscard]] inline double local_vs_caputo_gap(const ExprAst& f, OperatorKind kind, const FractalityParams& p,
                                                double alpha, double x, const QuadratureSpec& spec = {}) {
  return std::fabs(apply_closed(kind, p, f, x) - caputo(f, alpha, x, spec));
}

}  // namespace metriq
