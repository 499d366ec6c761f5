#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "metriq/error.hpp"
#include "metriq/summation.hpp"

namespace metriq {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule by Newton iteration on P_n.
[[nodiscard]] inline GaussLegendreRule gauss_legendre_rule(int n) {
  if (n < 1 || n > 128) throw DomainError("gauss_legendre_rule: n must be in [1, 128]");
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

struct QuadratureSpec {
  double abs_tol = 1e-8;
  int max_subdivisions = 64;  // cap on the number of panels
  int nodes_per_panel = 15;
};

inline void validate(const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0)) throw DomainError("quadrature: abs_tol must be > 0");
  if (spec.max_subdivisions < 1) throw DomainError("quadrature: max_subdivisions must be >= 1");
  if (spec.nodes_per_panel < 2 || spec.nodes_per_panel > 128) {
    throw DomainError("quadrature: nodes_per_panel must be in [2, 128]");
  }
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels = 0;
};

namespace detail {

template <typename F>
double apply_rule(const GaussLegendreRule& rule, F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  CompensatedSum acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * acc.value();
}

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

}  // namespace detail

// Globally adaptive Gauss-Legendre: the panel with the largest error estimate
// is bisected until the summed estimate drops to abs_tol. Each panel's error is
// estimated against a rule of roughly half the order.
template <typename F>
[[nodiscard]] QuadratureResult integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  validate(spec);
  const GaussLegendreRule fine = gauss_legendre_rule(spec.nodes_per_panel);
  const GaussLegendreRule coarse = gauss_legendre_rule((spec.nodes_per_panel + 1) / 2);

  auto make_panel = [&](double lo, double hi) {
    const double v = detail::apply_rule(fine, f, lo, hi);
    const double c = detail::apply_rule(coarse, f, lo, hi);
    return detail::Panel{lo, hi, v, std::fabs(v - c)};
  };

  std::priority_queue<detail::Panel> panels;
  panels.push(make_panel(a, b));
  double total_error = panels.top().error;
  int count = 1;

  while (total_error > spec.abs_tol) {
    if (count >= spec.max_subdivisions) {
      throw ToleranceNotMetError("quadrature: error estimate " + std::to_string(total_error) +
                                 " above tolerance after " + std::to_string(count) + " panels");
    }
    const detail::Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw ToleranceNotMetError("quadrature: panel width reached floating-point resolution");
    }
    panels.push(make_panel(worst.a, mid));
    panels.push(make_panel(mid, worst.b));
    ++count;
    // Re-sum rather than update incrementally so the estimate cannot drift.
    total_error = 0.0;
    auto copy = panels;
    while (!copy.empty()) {
      total_error += copy.top().error;
      copy.pop();
    }
  }

  std::vector<detail::Panel> ordered;
  ordered.reserve(panels.size());
  while (!panels.empty()) {
    ordered.push_back(panels.top());
    panels.pop();
  }
  // Sum in position order so the result does not depend on heap layout.
  std::sort(ordered.begin(), ordered.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  CompensatedSum value;
  for (const auto& p : ordered) value += p.value;
  return {value.value(), total_error, count};
}

}  // namespace metriq
