#pragma once

// Multiplier-form local metric derivatives. Each operator acts on a
// classically differentiable f as m(x) * f'(x); the limit (difference
// quotient) definitions are provided alongside for cross-checking.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "metriq/error.hpp"
#include "metriq/expr.hpp"

namespace metriq {

enum class OperatorKind {
  HausdorffFractalContinuum,  // (x/l0 + 1)^(1-zeta) / c1
  HausdorffScale,             // d/d(x^alpha): x^(1-alpha) / alpha
  Conformable,                // x^(1-alpha)
  Katugampola,                // x^(1-alpha)
  QDeriv,                     // 1 + (1-q) x
};

inline constexpr std::array<OperatorKind, 5> kAllOperatorKinds = {
    OperatorKind::HausdorffFractalContinuum, OperatorKind::HausdorffScale,
    OperatorKind::Conformable, OperatorKind::Katugampola, OperatorKind::QDeriv};

// Command-line names.
[[nodiscard]] constexpr std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::HausdorffFractalContinuum: return "hausdorff-fc";
    case OperatorKind::HausdorffScale: return "hausdorff-scale";
    case OperatorKind::Conformable: return "conformable";
    case OperatorKind::Katugampola: return "katugampola";
    case OperatorKind::QDeriv: return "qderiv";
  }
  return "?";
}

[[nodiscard]] inline std::optional<OperatorKind> operator_kind_from_string(std::string_view name) {
  for (OperatorKind k : kAllOperatorKinds) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

// Every order parameter of the local operators. Only the fields relevant to a
// given kind are read.
struct FractalityParams {
  double alpha = 1.0;  // conformable, Katugampola, Hausdorff scale form
  double zeta = 1.0;   // Hausdorff fractal continuum scaling exponent
  double q = 1.0;      // entropic index
  double l0 = 1.0;     // lower cutoff along x
  double c1 = 1.0;     // constant rescale of the fractal-continuum multiplier
};

// q = 1 - (1 - zeta) / l0.
[[nodiscard]] inline double bridge_params(double zeta, double l0) {
  if (!(l0 > 0.0)) throw DomainError("bridge_params: l0 must be > 0");
  return 1.0 - (1.0 - zeta) / l0;
}

// zeta = 1 - (1 - q) l0.
[[nodiscard]] inline double bridge_params_inv(double q, double l0) {
  if (!(l0 > 0.0)) throw DomainError("bridge_params_inv: l0 must be > 0");
  return 1.0 - (1.0 - q) * l0;
}

// Parameters with q tied to (zeta, l0) through the bridge relation.
[[nodiscard]] inline FractalityParams bridged_params(double zeta, double l0) {
  FractalityParams p;
  p.zeta = zeta;
  p.l0 = l0;
  p.q = bridge_params(zeta, l0);
  return p;
}

inline void validate(OperatorKind kind, const FractalityParams& p) {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  switch (kind) {
    case OperatorKind::HausdorffFractalContinuum:
      if (!in_unit(p.zeta)) throw DomainError("zeta must lie in (0, 1]");
      if (!(p.l0 > 0.0) || std::isinf(p.l0)) throw DomainError("l0 must be > 0");
      if (!(p.c1 > 0.0) || std::isinf(p.c1)) throw DomainError("c1 must be > 0");
      return;
    case OperatorKind::HausdorffScale:
    case OperatorKind::Conformable:
    case OperatorKind::Katugampola:
      if (!in_unit(p.alpha)) throw DomainError("alpha must lie in (0, 1]");
      return;
    case OperatorKind::QDeriv:
      if (!std::isfinite(p.q)) throw DomainError("q must be finite");
      return;
  }
}

// m(x) with operator = m(x) d/dx on differentiable functions.
[[nodiscard]] inline double multiplier(OperatorKind kind, const FractalityParams& p, double x) {
  validate(kind, p);
  if (kind == OperatorKind::QDeriv) {
    const double m = 1.0 + (1.0 - p.q) * x;
    if (m == 0.0) throw DomainError("qderiv: 1 + (1-q) x must be nonzero");
    return m;
  }
  if (!(x > 0.0)) throw DomainError("multiplier: x must be > 0");
  switch (kind) {
    case OperatorKind::HausdorffFractalContinuum:
      return std::pow(x / p.l0 + 1.0, 1.0 - p.zeta) / p.c1;
    case OperatorKind::HausdorffScale: return std::pow(x, 1.0 - p.alpha) / p.alpha;
    case OperatorKind::Conformable:
    case OperatorKind::Katugampola: return std::pow(x, 1.0 - p.alpha);
    case OperatorKind::QDeriv: break;
  }
  throw DomainError("multiplier: unknown operator kind");
}

// Closed form m(x) f'(x) with f' supplied.
[[nodiscard]] inline double apply_closed_with_derivative(OperatorKind kind, const FractalityParams& p,
                                                         const ExprAst& derivative, double x) {
  return multiplier(kind, p, x) * derivative(x);
}

// Closed form m(x) f'(x), f' by symbolic differentiation.
[[nodiscard]] inline double apply_closed(OperatorKind kind, const FractalityParams& p, const ExprAst& f,
                                         double x) {
  return apply_closed_with_derivative(kind, p, diff(f), x);
}

// x (-)_q y = (x - y) / (1 + (1-q) y), undefined at y = 1/(q-1).
[[nodiscard]] inline double deformed_difference(double q, double x, double y) {
  const double den = 1.0 + (1.0 - q) * y;
  if (den == 0.0) throw DomainError("deformed difference: y = 1/(q-1) is excluded");
  return (x - y) / den;
}

// Finite-eps difference quotient of the limit definition. Defined for the
// conformable, Katugampola and q-derivative kinds.
[[nodiscard]] inline double apply_limit(OperatorKind kind, const FractalityParams& p, const ExprAst& f,
                                        double x, double eps) {
  validate(kind, p);
  if (!(eps > 0.0)) throw DomainError("apply_limit: eps must be > 0");
  if (!(x > 0.0)) throw DomainError("apply_limit: x must be > 0");
  switch (kind) {
    case OperatorKind::Conformable:
      return (f(x + eps * std::pow(x, 1.0 - p.alpha)) - f(x)) / eps;
    case OperatorKind::Katugampola:
      return (f(x * std::exp(eps * std::pow(x, -p.alpha))) - f(x)) / eps;
    case OperatorKind::QDeriv: {
      const double y = x - eps;
      return (f(x) - f(y)) / deformed_difference(p.q, x, y);
    }
    default:
      throw DomainError("apply_limit: no limit definition for " + std::string(to_string(kind)));
  }
}

// Richardson extrapolation of apply_limit over eps, eps/2, ..., eps/2^(levels-1).
// The quotients are first order in eps, so each column removes one power.
[[nodiscard]] inline double apply_limit_extrapolated(OperatorKind kind, const FractalityParams& p,
                                                     const ExprAst& f, double x, double eps,
                                                     int levels = 4) {
  if (levels < 1 || levels > 16) throw DomainError("apply_limit_extrapolated: levels must be in [1, 16]");
  std::array<double, 16> row{};
  double h = eps;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    double carry = apply_limit(kind, p, f, x, h);
    double factor = 2.0;
    for (int j = 0; j < i; ++j, factor *= 2.0) {
      const double improved = carry + (carry - row[j]) / (factor - 1.0);
      row[j] = carry;
      carry = improved;
    }
    row[i] = carry;
  }
  return row[levels - 1];
}

}  // namespace metriq
