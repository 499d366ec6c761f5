#pragma once

// Special-function kernel: Gamma, Mittag-Leffler, q-exponential and the
// stretched exponential.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "metriq/error.hpp"
#include "metriq/summation.hpp"

namespace metriq {

namespace detail {

// Lanczos approximation, g = 7, nine coefficients (Godfrey's published set).
// Relative accuracy is about 1e-15 over the positive axis; the values are kept
// verbatim so results are bit-stable across builds.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoefficients = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double kSqrtTwoPi = 2.5066282746310005024157652848110452530069867406099;

// n! for n = 0..22, the range where every factorial is exactly representable.
inline constexpr std::array<double, 23> kExactFactorials = [] {
  std::array<double, 23> f{};
  f[0] = 1.0;
  for (std::size_t n = 1; n < f.size(); ++n) f[n] = f[n - 1] * static_cast<double>(n);
  return f;
}();

inline double lanczos_sum(double z) noexcept {
  double acc = kLanczosCoefficients[0];
  for (std::size_t i = 1; i < kLanczosCoefficients.size(); ++i) {
    acc += kLanczosCoefficients[i] / (z + static_cast<double>(i));
  }
  return acc;
}

// Gamma for x >= 0.5 (z = x - 1 >= -0.5).
inline double lanczos_gamma(double x) noexcept {
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) split in two halves so large arguments do not overflow early.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return kSqrtTwoPi * lanczos_sum(z) * half * (half * std::exp(-t));
}

inline double lanczos_log_gamma(double x) noexcept {
  const double z = x - 1.0;
  const double t = z + kLanczosG + 0.5;
  return (z + 0.5) * std::log(t) - t + std::log(kSqrtTwoPi * lanczos_sum(z));
}

// sin(pi x) with exact argument reduction, so that it vanishes at integers.
inline double sin_pi(double x) noexcept {
  double y = std::fmod(std::fabs(x), 2.0);
  double sign = x < 0.0 ? -1.0 : 1.0;
  if (y > 1.0) {
    y -= 1.0;
    sign = -sign;
  }
  if (y > 0.5) y = 1.0 - y;
  return sign * std::sin(std::numbers::pi * y);
}

inline bool is_nonpositive_integer(double x) noexcept {
  return x <= 0.0 && x == std::floor(x);
}

}  // namespace detail

inline constexpr double kGammaArgumentLimit = 170.0;

// Gamma function. Poles at the non-positive integers; |x| > 170 is rejected as
// overflow. Positive integers up to 23 return the exact factorial.
[[nodiscard]] inline double gamma_function(double x) {
  if (std::isnan(x)) throw DomainError("gamma: NaN argument");
  if (detail::is_nonpositive_integer(x)) {
    throw PoleError("gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (std::fabs(x) > kGammaArgumentLimit) {
    throw OverflowError("gamma: |x| > 170 overflows double range");
  }
  if (x == std::floor(x) && x <= 23.0) {
    return detail::kExactFactorials[static_cast<std::size_t>(x) - 1];
  }
  if (x >= 0.5) return detail::lanczos_gamma(x);
  if (x > 0.0) return detail::lanczos_gamma(x + 1.0) / x;
  // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
  return std::numbers::pi / (detail::sin_pi(x) * detail::lanczos_gamma(1.0 - x));
}

// log Gamma(x) for x > 0. Used where Gamma itself would overflow.
[[nodiscard]] inline double log_gamma(double x) {
  if (!(x > 0.0) || std::isinf(x)) throw DomainError("log_gamma: requires finite x > 0");
  if (x < 0.5) return detail::lanczos_log_gamma(x + 1.0) - std::log(x);
  return detail::lanczos_log_gamma(x);
}

// ---------------------------------------------------------------------------
// Mittag-Leffler
// ---------------------------------------------------------------------------

inline constexpr double kMittagLefflerZMax = 50.0;
inline constexpr double kMittagLefflerAlphaMin = 0.3;
inline constexpr double kMittagLefflerAlphaMax = 2.0;

struct MlArgs {
  double alpha = 1.0;
  double beta = 1.0;
  double z = 0.0;
};

struct SeriesTolerance {
  double rel_tol = 1e-14;
  int max_terms = 500;
};

struct MlValue {
  double value = 0.0;
  // Bound on |value - E_{alpha,beta}(z)|: rounding in every term plus the
  // geometric tail beyond the last summed term.
  double error_bound = 0.0;
  int terms = 0;
};

// Relative error budget of one series term z^k / Gamma(arg). The Lanczos
// error grows roughly linearly with the argument (about 1e-13 near 170).
[[nodiscard]] inline double ml_term_rel_err(double gamma_arg) noexcept {
  return 1e-15 * (4.0 + gamma_arg) + 4.0 * std::numeric_limits<double>::epsilon();
}

// Above this, z^k is formed in log space.
inline constexpr double kLogPowerLimit = 690.0;

inline void validate(const MlArgs& args) {
  if (!(args.alpha >= kMittagLefflerAlphaMin && args.alpha <= kMittagLefflerAlphaMax)) {
    throw DomainError("mittag_leffler: alpha must lie in [0.3, 2]");
  }
  if (!(args.beta > 0.0) || std::isinf(args.beta)) {
    throw DomainError("mittag_leffler: beta must be > 0");
  }
  if (!(std::fabs(args.z) <= kMittagLefflerZMax)) {
    throw DomainError("mittag_leffler: |z| must not exceed 50");
  }
}

inline void validate(const SeriesTolerance& tol) {
  if (!(tol.rel_tol > 0.0)) throw DomainError("series tolerance: rel_tol must be > 0");
  if (tol.max_terms < 10) throw DomainError("series tolerance: max_terms must be >= 10");
}

// E_{alpha,beta}(z) = sum_k z^k / Gamma(beta + alpha k), by compensated Taylor
// summation. Stops once two consecutive terms fall below rel_tol * |partial sum|.
[[nodiscard]] inline MlValue mittag_leffler(const MlArgs& args,
                                            const SeriesTolerance& tol = {}) {
  validate(args);
  validate(tol);

  CompensatedSum sum;
  double abs_sum = 0.0;
  double rounding_budget = 0.0;
  double previous = 0.0;
  int small_in_a_row = 0;
  const double log_abs_z = args.z == 0.0 ? 0.0 : std::log(std::fabs(args.z));

  for (int k = 0; k < tol.max_terms; ++k) {
    const double arg = args.beta + args.alpha * k;
    const double log_power = k * log_abs_z;
    double term;
    double term_rel_err = ml_term_rel_err(arg);
    if (arg <= kGammaArgumentLimit && log_power < kLogPowerLimit) {
      term = std::pow(args.z, k) / gamma_function(arg);
    } else if (args.z == 0.0) {
      term = 0.0;
    } else {
      // z^k or Gamma would overflow on its own; the quotient may not.
      const double sign = (args.z < 0.0 && (k % 2) == 1) ? -1.0 : 1.0;
      const double log_term = log_power - log_gamma(arg);
      term = sign * std::exp(log_term);
      term_rel_err += 4.0 * std::numeric_limits<double>::epsilon() * (std::fabs(log_term) + std::fabs(log_power));
    }
    if (!std::isfinite(term)) {
      throw OverflowError("mittag_leffler: series term overflow at k = " + std::to_string(k));
    }
    sum += term;
    abs_sum += std::fabs(term);
    rounding_budget += term_rel_err * std::fabs(term);
    if (!std::isfinite(abs_sum)) throw OverflowError("mittag_leffler: partial sums overflow");

    const double partial = sum.value();
    small_in_a_row = std::fabs(term) <= tol.rel_tol * std::fabs(partial) ? small_in_a_row + 1 : 0;
    if (small_in_a_row == 2) {
      double tail = 0.0;
      if (term != 0.0 && previous != 0.0) {
        const double ratio = std::fabs(term / previous);
        tail = ratio < 1.0 ? std::fabs(term) * ratio / (1.0 - ratio)
                           : std::numeric_limits<double>::infinity();
      }
      constexpr double eps = std::numeric_limits<double>::epsilon();
      MlValue out;
      out.value = partial;
      out.terms = k + 1;
      out.error_bound = rounding_budget + 2.0 * eps * std::fabs(partial) + tail;
      return out;
    }
    previous = term;
  }
  throw NonConvergenceError("mittag_leffler: max_terms reached before the stopping rule fired");
}

// One-parameter shorthand E_alpha(z).
[[nodiscard]] inline double mittag_leffler(double alpha, double z) {
  return mittag_leffler(MlArgs{alpha, 1.0, z}).value;
}

// ---------------------------------------------------------------------------
// Deformed exponentials
// ---------------------------------------------------------------------------

// e_q(x) = [1 + (1-q) x]^(1/(1-q)), exp(x) at q = 1.
[[nodiscard]] inline double q_exponential(double q, double x) {
  const double u = 1.0 - q;
  if (u == 0.0) return std::exp(x);
  const double base = 1.0 + u * x;
  if (!(base > 0.0)) throw DomainError("q_exponential: 1 + (1-q) x must be > 0");
  if (std::fabs(u) < 1e-8) return std::exp(std::log1p(u * x) / u);
  return std::pow(base, 1.0 / u);
}

// exp(x^alpha) for alpha in (0, 1].
[[nodiscard]] inline double stretched_exp(double alpha, double x) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("stretched_exp: alpha must lie in (0, 1]");
  if (x < 0.0 && alpha != 1.0) throw DomainError("stretched_exp: x must be >= 0");
  return std::exp(std::pow(x, alpha));
}

}  // namespace metriq
