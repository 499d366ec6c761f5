#pragma once

// CSV, JSON and SVG emitters for tabular results.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metriq/error.hpp"

namespace metriq {

// Named columns of equal length, plus scalar metadata carried into JSON and
// into CSV comment lines.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[col][row]
  std::vector<bool> integral;             // printed without decimals
  std::vector<std::pair<std::string, std::string>> meta;

  void add_column(std::string name, std::vector<double> values, bool is_integral = false) {
    if (!data.empty() && values.size() != data.front().size()) {
      throw DomainError("table: column '" + name + "' has a different length");
    }
    columns.push_back(std::move(name));
    data.push_back(std::move(values));
    integral.push_back(is_integral);
  }
  [[nodiscard]] std::size_t rows() const noexcept { return data.empty() ? 0 : data.front().size(); }
};

// Fixed notation with `precision` decimals; scientific when fixed would lose
// the value (tiny) or be unwieldy (huge). Formatting avoids the C++ locale.
[[nodiscard]] inline std::string format_value(double v, int precision = 12) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const double a = std::fabs(v);
  if (v != 0.0 && (a < 1e-4 || a >= 1e15)) {
    std::snprintf(buf, sizeof(buf), "%.*e", precision, v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v == 0.0 ? 0.0 : v);
  }
  return buf;
}

inline constexpr const char* kCsvHeader = "# metriq v1";

[[nodiscard]] inline std::string to_csv(const Table& t, int precision = 12) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& [k, v] : t.meta) out += "# " + k + "=" + v + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += t.columns[c];
  }
  out += '\n';
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ',';
      out += t.integral[c] ? format_value(t.data[c][r], 0) : format_value(t.data[c][r], precision);
    }
    out += '\n';
  }
  return out;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["schema"] = "metriq v1";
  for (const auto& [k, v] : t.meta) j[k] = v;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (t.integral[c]) {
      std::vector<long long> ints(t.data[c].begin(), t.data[c].end());
      j[t.columns[c]] = ints;
    } else {
      j[t.columns[c]] = t.data[c];
    }
  }
  return j;
}

namespace detail {

// About five round tick values spanning [lo, hi].
inline std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
    ticks.push_back(std::fabs(v) < 1e-12 * span ? 0.0 : v);
  }
  return ticks;
}

}  // namespace detail

// Single polyline of column `y` against column `x`, with axes and tick labels.
[[nodiscard]] inline std::string to_svg(const Table& t, std::size_t x_col, std::size_t y_col) {
  if (x_col >= t.columns.size() || y_col >= t.columns.size()) throw DomainError("svg: column index out of range");
  const auto& xs = t.data[x_col];
  const auto& ys = t.data[y_col];
  if (xs.size() < 2) throw DomainError("svg: need at least two points");

  constexpr double W = 640, H = 400, L = 70, R = 20, T = 20, B = 50;
  auto [xmin_it, xmax_it] = std::minmax_element(xs.begin(), xs.end());
  auto [ymin_it, ymax_it] = std::minmax_element(ys.begin(), ys.end());
  double x0 = *xmin_it, x1 = *xmax_it, y0 = *ymin_it, y1 = *ymax_it;
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"11\">\n",
                W, H, W, H);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf), "<path d=\"M%.2f %.2f H%.2f M%.2f %.2f V%.2f\" stroke=\"black\" fill=\"none\"/>\n",
                L, H - B, W - R, L, H - B, T);
  out += buf;
  for (double v : detail::nice_ticks(x0, x1)) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">%g</text>\n",
                  px(v), H - B, px(v), H - B + 5, px(v), H - B + 18, v);
    out += buf;
  }
  for (double v : detail::nice_ticks(y0, y1)) {
    std::snprintf(buf, sizeof(buf),
                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"black\"/>"
                  "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"end\">%g</text>\n",
                  L - 5, py(v), L, py(v), L - 8, py(v) + 4, v);
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "<text x=\"%.2f\" y=\"%.2f\" text-anchor=\"middle\">", (L + W - R) / 2, H - 10);
  out += buf;
  out += t.columns[x_col] + "</text>\n";
  std::snprintf(buf, sizeof(buf), "<text x=\"14\" y=\"%.2f\" transform=\"rotate(-90 14 %.2f)\" text-anchor=\"middle\">",
                (T + H - B) / 2, (T + H - B) / 2);
  out += buf;
  out += t.columns[y_col] + "</text>\n";
  out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%s%.2f,%.2f", i ? " " : "", px(xs[i]), py(ys[i]));
    out += buf;
  }
  out += "\"/>\n</svg>\n";
  return out;
}

}  // namespace metriq
