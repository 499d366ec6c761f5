#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "metriq/error.hpp"

namespace metriq {

struct LoglogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t points_used = 0;
};

// Zero ordinates are floored to this value for display and left out of the fit.
inline constexpr double kLoglogFloor = 1e-300;

// Least-squares line through (log x, log y). The points with the smallest and
// largest abscissa are dropped first; they carry the most roundoff (small x)
// and the most curvature (large x).
[[nodiscard]] inline LoglogFit fit_loglog(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DomainError("fit_loglog: xs and ys differ in length");
  if (xs.size() < 4) throw InsufficientPointsError("fit_loglog: need at least 4 points");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !std::isfinite(xs[i])) throw DomainError("fit_loglog: abscissae must be positive");
    if (!(ys[i] >= 0.0) || !std::isfinite(ys[i])) throw DomainError("fit_loglog: ordinates must be >= 0");
  }

  const auto [min_it, max_it] = std::minmax_element(xs.begin(), xs.end());
  const auto drop_lo = static_cast<std::size_t>(min_it - xs.begin());
  const auto drop_hi = static_cast<std::size_t>(max_it - xs.begin());

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i == drop_lo || i == drop_hi) continue;
    const double y = ys[i] == 0.0 ? kLoglogFloor : ys[i];
    if (y == kLoglogFloor) continue;
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(y));
  }
  if (lx.size() < 2) throw InsufficientPointsError("fit_loglog: fewer than 2 usable points after trimming");

  const auto n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw InsufficientPointsError("fit_loglog: abscissae are all equal");

  LoglogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.slope * lx[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  fit.points_used = lx.size();
  return fit;
}

}  // namespace metriq
