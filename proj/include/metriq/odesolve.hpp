#pragma once

// Eigen-equations D y = lambda y, y(0) = 1, under the local operators (solved
// exactly in a regularising coordinate) and under the Caputo derivative
// (fractional Adams-Bashforth-Moulton).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "metriq/error.hpp"
#include "metriq/expr.hpp"
#include "metriq/localops.hpp"
#include "metriq/specfun.hpp"
#include "metriq/summation.hpp"

namespace metriq {

struct SolveResult {
  std::vector<double> grid;
  std::vector<double> y;
  std::vector<double> reference;
  double max_rel_err = 0.0;
};

// max over the grid of |y - ref| / max(1, |ref|).
[[nodiscard]] inline double max_relative_error(const std::vector<double>& y, const std::vector<double>& ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    worst = std::max(worst, std::fabs(y[i] - ref[i]) / std::max(1.0, std::fabs(ref[i])));
  }
  return worst;
}

// s(x) = int_0^x dt / m(t). In s the local equation m(x) y' = lambda y becomes
// dy/ds = lambda y, which is regular at the origin.
[[nodiscard]] inline double substituted_coordinate(OperatorKind kind, const FractalityParams& p, double x) {
  validate(kind, p);
  switch (kind) {
    case OperatorKind::HausdorffScale: return std::pow(x, p.alpha);
    case OperatorKind::Conformable:
    case OperatorKind::Katugampola: return std::pow(x, p.alpha) / p.alpha;
    case OperatorKind::QDeriv: {
      const double u = 1.0 - p.q;
      return u == 0.0 ? x : std::log1p(u * x) / u;
    }
    case OperatorKind::HausdorffFractalContinuum:
      return p.c1 * p.l0 * std::expm1(p.zeta * std::log1p(x / p.l0)) / p.zeta;
  }
  throw DomainError("substituted_coordinate: unknown operator kind");
}

[[nodiscard]] inline double inverse_substituted_coordinate(OperatorKind kind, const FractalityParams& p, double s) {
  validate(kind, p);
  switch (kind) {
    case OperatorKind::HausdorffScale: return std::pow(s, 1.0 / p.alpha);
    case OperatorKind::Conformable:
    case OperatorKind::Katugampola: return std::pow(p.alpha * s, 1.0 / p.alpha);
    case OperatorKind::QDeriv: {
      const double u = 1.0 - p.q;
      return u == 0.0 ? s : std::expm1(u * s) / u;
    }
    case OperatorKind::HausdorffFractalContinuum:
      return p.l0 * std::expm1(std::log1p(p.zeta * s / (p.c1 * p.l0)) / p.zeta);
  }
  throw DomainError("inverse_substituted_coordinate: unknown operator kind");
}

// Closed-form solution exp(lambda s(x)). For HausdorffScale and lambda = 1 this
// is exp(x^alpha); for QDeriv and lambda = 1 it is the q-exponential.
[[nodiscard]] inline double local_reference(OperatorKind kind, const FractalityParams& p, double lambda, double x) {
  return std::exp(lambda * substituted_coordinate(kind, p, x));
}

// Classic fourth-order Runge-Kutta in s with step h; the final step is
// shortened to land on s(x_end).
[[nodiscard]] inline SolveResult solve_local(OperatorKind kind, const FractalityParams& p, double lambda,
                                             double x_end, double h) {
  validate(kind, p);
  if (!(x_end > 0.0)) throw DomainError("solve_local: x_end must be > 0");
  if (kind == OperatorKind::QDeriv && !(1.0 + (1.0 - p.q) * x_end > 0.0)) {
    throw DomainError("solve_local: qderiv multiplier vanishes inside (0, x_end]");
  }
  const double s_end = substituted_coordinate(kind, p, x_end);
  if (!(h > 0.0) || h >= s_end / 10.0) {
    throw StepError("solve_local: step must satisfy 0 < h < s(x_end)/10 = " + detail::format_number(s_end / 10.0));
  }

  const auto steps = static_cast<std::size_t>(std::ceil(s_end / h - 1e-9));
  SolveResult out;
  out.grid.reserve(steps + 1);
  out.y.reserve(steps + 1);
  out.grid.push_back(0.0);
  out.y.push_back(1.0);

  auto rhs = [lambda](double y) { return lambda * y; };
  double y = 1.0;
  double s = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    const double s_next = i == steps ? s_end : static_cast<double>(i) * h;
    const double dt = s_next - s;
    const double k1 = rhs(y);
    const double k2 = rhs(y + 0.5 * dt * k1);
    const double k3 = rhs(y + 0.5 * dt * k2);
    const double k4 = rhs(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s = s_next;
    out.grid.push_back(i == steps ? x_end : inverse_substituted_coordinate(kind, p, s));
    out.y.push_back(y);
  }

  out.reference.reserve(out.grid.size());
  for (double x : out.grid) out.reference.push_back(local_reference(kind, p, lambda, x));
  out.max_rel_err = max_relative_error(out.y, out.reference);
  return out;
}

inline constexpr double kCaputoDivergenceLimit = 1e12;
inline constexpr int kCaputoCorrectorPasses = 2;

// Fractional Adams-Bashforth-Moulton predictor-corrector for the Caputo
// problem D^alpha y = lambda y, y(0) = 1, on a uniform grid. The step is
// adjusted down so that x_end is a grid point. Reference: E_alpha(lambda x^alpha).
[[nodiscard]] inline SolveResult solve_caputo(double alpha, double lambda, double x_end, double h) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("solve_caputo: alpha must lie in (0, 1)");
  if (!(x_end > 0.0)) throw DomainError("solve_caputo: x_end must be > 0");
  if (!(h > 0.0) || h >= x_end / 10.0) throw StepError("solve_caputo: step must satisfy 0 < h < x_end/10");

  const auto n = static_cast<std::size_t>(std::ceil(x_end / h - 1e-9));
  const double step = x_end / static_cast<double>(n);
  const double a1 = alpha + 1.0;

  // Predictor weights b_m = (m+1)^alpha - m^alpha; corrector interior weights
  // c_m = (m+2)^(alpha+1) + m^(alpha+1) - 2 (m+1)^(alpha+1).
  std::vector<double> b(n + 1), c(n + 1);
  for (std::size_t m = 0; m <= n; ++m) {
    const double md = static_cast<double>(m);
    b[m] = std::pow(md + 1.0, alpha) - std::pow(md, alpha);
    c[m] = std::pow(md + 2.0, a1) + std::pow(md, a1) - 2.0 * std::pow(md + 1.0, a1);
  }
  const double pred_scale = std::pow(step, alpha) / gamma_function(alpha + 1.0);
  const double corr_scale = std::pow(step, alpha) / gamma_function(alpha + 2.0);

  SolveResult out;
  out.grid.resize(n + 1);
  out.y.resize(n + 1);
  std::vector<double> f(n + 1);
  out.grid[0] = 0.0;
  out.y[0] = 1.0;
  f[0] = lambda;

  for (std::size_t k = 0; k < n; ++k) {
    // Step from t_k to t_{k+1}.
    const double kd = static_cast<double>(k);
    CompensatedSum predictor, history;
    for (std::size_t j = 0; j <= k; ++j) predictor += b[k - j] * f[j];
    history += (std::pow(kd, a1) - (kd - alpha) * std::pow(kd + 1.0, alpha)) * f[0];
    for (std::size_t j = 1; j <= k; ++j) history += c[k - j] * f[j];

    double y_next = 1.0 + pred_scale * predictor.value();
    const double hist = history.value();
    for (int pass = 0; pass < kCaputoCorrectorPasses; ++pass) {
      y_next = 1.0 + corr_scale * (lambda * y_next + hist);
    }
    if (!(std::fabs(y_next) <= kCaputoDivergenceLimit)) {
      throw DivergenceError("solve_caputo: |y| exceeded 1e12 at step " + std::to_string(k + 1));
    }
    out.grid[k + 1] = k + 1 == n ? x_end : static_cast<double>(k + 1) * step;
    out.y[k + 1] = y_next;
    f[k + 1] = lambda * y_next;
  }

  out.reference.reserve(n + 1);
  for (double t : out.grid) {
    out.reference.push_back(mittag_leffler(MlArgs{alpha, 1.0, lambda * std::pow(t, alpha)}).value);
  }
  out.max_rel_err = max_relative_error(out.y, out.reference);
  return out;
}

struct QExponentialResidual {
  double ode = 0.0;        // max |[1 + (1-q) x] y' - y|
  double power_law = 0.0;  // max |y' - y^q|
};

// Checks the q-exponential against both equations it solves, with y' from
// symbolic differentiation of the closed form.
[[nodiscard]] inline QExponentialResidual q_exponential_residual(double q, double x_end, int points) {
  if (points < 2) throw DomainError("q_exponential_residual: need at least 2 points");
  if (!(x_end > 0.0)) throw DomainError("q_exponential_residual: x_end must be > 0");
  using namespace expr;
  const double u = 1.0 - q;
  const ExprAst y_expr = u == 0.0 ? call(Builtin::Exp, variable())
                                  : pow(add(constant(1.0), mul(constant(u), variable())), constant(1.0 / u));
  const ExprAst dy = diff(y_expr);
  FractalityParams p;
  p.q = q;
  QExponentialResidual r;
  for (int i = 0; i < points; ++i) {
    const double x = x_end * i / (points - 1);
    const double y = q_exponential(q, x);
    const double slope = dy(x);
    r.ode = std::max(r.ode, std::fabs(multiplier(OperatorKind::QDeriv, p, x) * slope - y));
    r.power_law = std::max(r.power_law, std::fabs(slope - std::pow(y, q)));
  }
  return r;
}

}  // namespace metriq
