#pragma once

// Verification harness: structural checks of the axiomatic operator and
// scaling-law scans of the Leibniz defect, the chain-rule defect and the
// local-vs-Caputo gap as alpha -> 1.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "metriq/axiomatic.hpp"
#include "metriq/error.hpp"
#include "metriq/expr.hpp"
#include "metriq/localops.hpp"
#include "metriq/loglog.hpp"
#include "metriq/nonlocal.hpp"
#include "metriq/series.hpp"
#include "metriq/specfun.hpp"

namespace metriq {

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

// std::mt19937_64 is fully specified by the standard; the std distributions
// are not, so the mapping to [0, 1) is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

// Rounded to a few significant digits so generated instances print compactly
// and replay exactly from their text.
inline double round_sig(double v, int digits = 4) {
  if (v == 0.0) return 0.0;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  double out = 0.0;
  std::from_chars(buf, buf + std::char_traits<char>::length(buf), out);
  return out;
}

// A smooth expression that is well defined with bounded derivatives on [0.25, 4].
inline std::string random_smooth_expression(Rng& rng) {
  auto num = [&](double lo, double hi) { return detail::format_number(round_sig(rng.uniform(lo, hi))); };
  switch (rng.index(8)) {
    case 0: return num(-2, 2) + "*x^3 + " + num(-2, 2) + "*x^2 + " + num(-2, 2) + "*x + " + num(-2, 2);
    case 1: return "exp(" + num(-1, 1) + "*x)";
    case 2: return "sin(" + num(0.2, 2) + "*x + " + num(-1, 1) + ")";
    case 3: return "ln(x + " + num(0.1, 1) + ")";
    case 4: return "sqrt(x + " + num(0.1, 1) + ")";
    case 5: return "x^" + num(0.5, 3);
    case 6: return "cos(" + num(0.2, 1.5) + "*x)*exp(" + num(-0.5, 0.5) + "*x)";
    default: return "1/(x + " + num(0.2, 1) + ")";
  }
}

// Random series with offset 0, 1..6 terms, coefficients in [-2, 2] and
// exponents in [0, 3].
inline GeneralizedPowerSeries random_series(Rng& rng) {
  const std::size_t n = 1 + rng.index(6);
  std::vector<PowerTerm> terms;
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = rng.index(5) == 0 ? 0.0 : round_sig(rng.uniform(0.0, 3.0));
    terms.push_back({round_sig(rng.uniform(-2.0, 2.0)), static_cast<exponent_t>(nu)});
  }
  return {0.0, std::move(terms)};
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

// alpha_k = 1 - 2^(-k) for k = k_min..k_max.
struct AlphaLadder {
  int k_min = 3;
  int k_max = 9;

  [[nodiscard]] bool empty() const noexcept { return k_max < k_min; }
  [[nodiscard]] std::vector<double> alphas() const {
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(1.0 - std::ldexp(1.0, -k));
    return out;
  }
  [[nodiscard]] std::string to_string() const {
    return std::to_string(k_min) + ".." + std::to_string(k_max);
  }
};

// "k1..k2".
[[nodiscard]] inline AlphaLadder parse_ladder(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) throw ConfigError("ladder must look like k1..k2, got '" + std::string(text) + "'");
  auto to_int = [&](std::string_view part) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc{} || ptr != part.data() + part.size()) {
      throw ConfigError("ladder bound '" + std::string(part) + "' is not an integer");
    }
    return v;
  };
  AlphaLadder ladder{to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
  if (ladder.k_min < 1 || ladder.k_max > 40) throw ConfigError("ladder bounds must lie in [1, 40]");
  return ladder;
}

struct LeibnizCase {
  double mu = 1.0;
  double nu = 1.0;
  double x = 1.0;
};

struct ChainCase {
  std::string f;
  std::string w;  // series literal
  double x0 = 1.0;
};

struct GapCase {
  std::string f;
  OperatorKind kind = OperatorKind::Conformable;
  double x = 1.0;
};

struct HarnessConfig {
  std::uint64_t seed = 0x6d6574726971ULL;
  AlphaLadder ladder;

  std::vector<LeibnizCase> leibniz = {{1.0, 1.0, 1.0}, {0.5, 1.5, 1.0}, {2.0, 3.0, 1.0}};
  std::vector<ChainCase> chain = {
      {"exp(x)", "a=0; 1@1", 1.0}, {"x^2", "a=0; 1@0.5", 1.0}, {"sin(x)", "a=0; 1@1, 0.5@2", 0.8}};
  std::vector<GapCase> gap = {{"x", OperatorKind::Conformable, 1.0},
                              {"x^2", OperatorKind::Conformable, 1.0},
                              {"x^3", OperatorKind::Conformable, 1.0}};

  std::vector<double> eigen_alphas = {0.3, 0.5, 0.7, 0.9, 0.99, 1.0};
  std::vector<double> eigen_lambdas = {-2.0, -1.0, 1.0, 2.0};
  std::vector<int> eigen_terms = {10, 30, 50};

  std::vector<double> power_nus = {1.0, 1.5, 2.0, 3.0};
  std::vector<double> power_alphas = {0.3, 0.5, 0.7, 0.9};
  std::vector<double> power_xs = {0.5, 1.0, 2.0};

  int random_instances = 100;
  int linearity_samples = 100;

  QuadratureSpec quadrature;

  double eigen_tol = 1e-12;
  double linearity_tol = 1e-13;
  double power_rule_factor = 10.0;  // times quadrature.abs_tol
  double local_reduction_tol = 1e-12;
  double classical_tol = 1e-6;
  double crosscheck_tol = 1e-4;

  double leibniz_slope_band = 0.05;
  double chain_min_slope = 0.9;
  double gap_slope_band = 0.1;
  double min_r2 = 0.98;
};

namespace detail {

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

// Overrides the defaults with the keys present in `j`. Unknown keys are
// rejected so that typos do not silently fall back to defaults.
[[nodiscard]] inline HarnessConfig config_from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "seed", "ladder", "leibniz", "chain", "gap", "eigen_alphas", "eigen_lambdas", "eigen_terms",
      "power_nus", "power_alphas", "power_xs", "random_instances", "linearity_samples", "quadrature",
      "tolerances", "bands"};
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  HarnessConfig c;
  try {
    detail::read_opt(j, "seed", c.seed);
    if (j.contains("ladder")) c.ladder = parse_ladder(j.at("ladder").get<std::string>());
    if (j.contains("leibniz")) {
      c.leibniz.clear();
      for (const auto& e : j.at("leibniz")) c.leibniz.push_back({e.at("mu"), e.at("nu"), e.value("x", 1.0)});
    }
    if (j.contains("chain")) {
      c.chain.clear();
      for (const auto& e : j.at("chain")) c.chain.push_back({e.at("f"), e.at("w"), e.value("x0", 1.0)});
    }
    if (j.contains("gap")) {
      c.gap.clear();
      for (const auto& e : j.at("gap")) {
        const std::string op = e.value("op", std::string("conformable"));
        const auto kind = operator_kind_from_string(op);
        if (!kind) throw ConfigError("unknown operator '" + op + "'");
        c.gap.push_back({e.at("f"), *kind, e.value("x", 1.0)});
      }
    }
    detail::read_opt(j, "eigen_alphas", c.eigen_alphas);
    detail::read_opt(j, "eigen_lambdas", c.eigen_lambdas);
    detail::read_opt(j, "eigen_terms", c.eigen_terms);
    detail::read_opt(j, "power_nus", c.power_nus);
    detail::read_opt(j, "power_alphas", c.power_alphas);
    detail::read_opt(j, "power_xs", c.power_xs);
    detail::read_opt(j, "random_instances", c.random_instances);
    detail::read_opt(j, "linearity_samples", c.linearity_samples);
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      detail::read_opt(q, "abs_tol", c.quadrature.abs_tol);
      detail::read_opt(q, "max_subdivisions", c.quadrature.max_subdivisions);
      detail::read_opt(q, "nodes_per_panel", c.quadrature.nodes_per_panel);
    }
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      detail::read_opt(t, "eigen", c.eigen_tol);
      detail::read_opt(t, "linearity", c.linearity_tol);
      detail::read_opt(t, "power_rule_factor", c.power_rule_factor);
      detail::read_opt(t, "local_reduction", c.local_reduction_tol);
      detail::read_opt(t, "classical", c.classical_tol);
      detail::read_opt(t, "crosscheck", c.crosscheck_tol);
    }
    if (j.contains("bands")) {
      const auto& b = j.at("bands");
      detail::read_opt(b, "leibniz_slope", c.leibniz_slope_band);
      detail::read_opt(b, "chain_min_slope", c.chain_min_slope);
      detail::read_opt(b, "gap_slope", c.gap_slope_band);
      detail::read_opt(b, "min_r2", c.min_r2);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return c;
}

inline void validate(const HarnessConfig& c) {
  if (c.ladder.empty()) throw ConfigError("alpha ladder is empty");
  if (c.random_instances < 1 || c.linearity_samples < 1) throw ConfigError("instance counts must be >= 1");
  validate(c.quadrature);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

enum class DefectRule { Leibniz, Chain, CaputoGap };

[[nodiscard]] constexpr std::string_view to_string(DefectRule r) noexcept {
  switch (r) {
    case DefectRule::Leibniz: return "leibniz";
    case DefectRule::Chain: return "chain";
    case DefectRule::CaputoGap: return "caputo-gap";
  }
  return "?";
}

struct SlopeBand {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] bool contains(double s) const noexcept { return s >= lo && s <= hi; }
};

struct DefectReport {
  std::string case_id;
  DefectRule rule = DefectRule::Leibniz;
  std::vector<std::pair<std::string, std::string>> params;  // operator inputs, as text
  std::string replay;                                       // CLI command reproducing this row
  std::vector<double> alphas;
  std::vector<double> one_minus_alpha;
  std::vector<double> magnitudes;
  LoglogFit fit;
  SlopeBand band;
  double min_r2 = 0.98;
  bool pass = false;
  std::string error;  // set when a numeric error stopped the case
};

struct CheckResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  int cases = 0;
  bool pass = false;
  std::string error;
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::string ladder;
  std::vector<CheckResult> checks;
  std::vector<DefectReport> reports;

  [[nodiscard]] bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; }) &&
           std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
  }
};

// Evaluates `defect(alpha)` along the ladder and fits |defect| against 1 - alpha.
[[nodiscard]] inline DefectReport run_defect_scan(DefectReport report, const AlphaLadder& ladder,
                                                  const std::function<double(double)>& defect) {
  if (ladder.empty()) throw ConfigError("alpha ladder is empty");
  try {
    for (double a : ladder.alphas()) {
      report.alphas.push_back(a);
      report.one_minus_alpha.push_back(1.0 - a);
      report.magnitudes.push_back(std::fabs(defect(a)));
    }
    report.fit = fit_loglog(report.one_minus_alpha, report.magnitudes);
    report.pass = report.band.contains(report.fit.slope) && report.fit.r2 >= report.min_r2;
  } catch (const Error& e) {
    report.error = std::string(to_string(e.kind())) + ": " + e.what();
    report.pass = false;
  }
  return report;
}

namespace detail {

inline std::string quote(const std::string& s) { return "'" + s + "'"; }

}  // namespace detail

[[nodiscard]] inline DefectReport leibniz_scan(const LeibnizCase& c, const AlphaLadder& ladder, double band,
                                               double min_r2, std::string id = "leibniz") {
  DefectReport r;
  r.case_id = std::move(id);
  r.rule = DefectRule::Leibniz;
  r.params = {{"mu", detail::format_number(c.mu)}, {"nu", detail::format_number(c.nu)}, {"x", detail::format_number(c.x)}};
  r.replay = "metriq defect leibniz --mu " + detail::format_number(c.mu) + " --nu " + detail::format_number(c.nu) +
             " --x " + detail::format_number(c.x) + " --ladder " + ladder.to_string();
  r.band = {1.0 - band, 1.0 + band};
  r.min_r2 = min_r2;
  return run_defect_scan(std::move(r), ladder, [&](double a) { return leibniz_defect(c.mu, c.nu, a, c.x); });
}

[[nodiscard]] inline DefectReport chain_scan(const ChainCase& c, const AlphaLadder& ladder, double min_slope,
                                             double min_r2, std::string id = "chain") {
  DefectReport r;
  r.case_id = std::move(id);
  r.rule = DefectRule::Chain;
  r.params = {{"f", c.f}, {"w", c.w}, {"x0", detail::format_number(c.x0)}};
  r.replay = "metriq defect chain --f " + detail::quote(c.f) + " --w " + detail::quote(c.w) + " --x0 " +
             detail::format_number(c.x0) + " --ladder " + ladder.to_string();
  r.band = {min_slope, std::numeric_limits<double>::infinity()};
  r.min_r2 = min_r2;
  try {
    const ExprAst f = parse(c.f);
    const GeneralizedPowerSeries w = parse_series(c.w);
    return run_defect_scan(std::move(r), ladder, [&](double a) { return chain_defect(f, w, a, c.x0); });
  } catch (const Error& e) {
    r.error = std::string(to_string(e.kind())) + ": " + e.what();
    return r;
  }
}

// The local operator's order parameter follows alpha (alpha, zeta and q are
// all set to it).
[[nodiscard]] inline DefectReport gap_scan(const GapCase& c, const AlphaLadder& ladder, double band, double min_r2,
                                           const QuadratureSpec& quad, std::string id = "caputo-gap") {
  DefectReport r;
  r.case_id = std::move(id);
  r.rule = DefectRule::CaputoGap;
  r.params = {{"f", c.f}, {"op", std::string(to_string(c.kind))}, {"x", detail::format_number(c.x)}};
  r.replay = "metriq defect caputo-gap --f " + detail::quote(c.f) + " --op " + std::string(to_string(c.kind)) +
             " --x " + detail::format_number(c.x) + " --ladder " + ladder.to_string();
  r.band = {1.0 - band, 1.0 + band};
  r.min_r2 = min_r2;
  try {
    const ExprAst f = parse(c.f);
    return run_defect_scan(std::move(r), ladder, [&](double a) {
      FractalityParams p;
      p.alpha = p.zeta = p.q = a;
      return local_vs_caputo_gap(f, c.kind, p, a, c.x, quad);
    });
  } catch (const Error& e) {
    r.error = std::string(to_string(e.kind())) + ": " + e.what();
    return r;
  }
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

namespace detail {

inline CheckResult run_check(std::string name, double tolerance, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  try {
    body(r);
    r.pass = r.max_error <= tolerance;
  } catch (const Error& e) {
    r.error = std::string(to_string(e.kind())) + ": " + e.what();
    r.pass = false;
  }
  return r;
}

inline void record(CheckResult& r, double err) {
  ++r.cases;
  if (std::isnan(err)) err = std::numeric_limits<double>::infinity();
  r.max_error = std::max(r.max_error, err);
}

}  // namespace detail

// d_alpha(c1 s1 + c2 s2) against c1 d_alpha(s1) + c2 d_alpha(s2).
[[nodiscard]] inline CheckResult check_linearity(const HarnessConfig& cfg) {
  return detail::run_check("linearity", cfg.linearity_tol, [&](CheckResult& r) {
    Rng rng(cfg.seed ^ 0x01);
    for (int i = 0; i < cfg.linearity_samples; ++i) {
      const auto s1 = random_series(rng);
      const auto s2 = random_series(rng);
      const double c1 = round_sig(rng.uniform(-2, 2)), c2 = round_sig(rng.uniform(-2, 2));
      const double a = rng.uniform(0.3, 1.0);
      const auto lhs = d_alpha(c1 * s1 + c2 * s2, a);
      const auto rhs = c1 * d_alpha(s1, a) + c2 * d_alpha(s2, a);
      detail::record(r, max_coefficient_mismatch(lhs, rhs));
    }
  });
}

// The power rule of the axiomatic operator against the Caputo quadrature on t^nu.
[[nodiscard]] inline CheckResult check_power_rule(const HarnessConfig& cfg) {
  return detail::run_check("power_rule_vs_caputo", cfg.power_rule_factor * cfg.quadrature.abs_tol, [&](CheckResult& r) {
    for (double nu : cfg.power_nus) {
      const ExprAst f = expr::pow(expr::variable(), expr::constant(nu));
      const GeneralizedPowerSeries s(0.0, {{1.0, static_cast<exponent_t>(nu)}});
      for (double a : cfg.power_alphas) {
        const GeneralizedPowerSeries ds = d_alpha(s, a);
        for (double x : cfg.power_xs) detail::record(r, std::fabs(ds(x) - caputo(f, a, x, cfg.quadrature)));
      }
    }
  });
}

// D^alpha maps constants to the empty series.
[[nodiscard]] inline CheckResult check_constant_annihilation(const HarnessConfig& cfg) {
  return detail::run_check("constant_annihilation", 0.0, [&](CheckResult& r) {
    for (double a : cfg.ladder.alphas()) {
      for (double c : {1.0, -3.5, 1e6}) {
        const auto d = d_alpha(constant_series(c), a);
        detail::record(r, d.empty() ? 0.0 : std::numeric_limits<double>::infinity());
      }
    }
  });
}

[[nodiscard]] inline CheckResult check_eigenfunction(const HarnessConfig& cfg) {
  return detail::run_check("eigenfunction", cfg.eigen_tol, [&](CheckResult& r) {
    for (double a : cfg.eigen_alphas) {
      for (double l : cfg.eigen_lambdas) {
        for (int n : cfg.eigen_terms) detail::record(r, eigen_check(a, l, n));
      }
    }
  });
}

// d_alpha(s, 1) is the classical term-wise derivative c nu t^(nu-1), exactly.
[[nodiscard]] inline CheckResult check_axiomatic_alpha_one(const HarnessConfig& cfg) {
  return detail::run_check("alpha_one_axiomatic", 0.0, [&](CheckResult& r) {
    Rng rng(cfg.seed ^ 0x02);
    for (int i = 0; i < cfg.random_instances; ++i) {
      const auto s = random_series(rng);
      std::vector<PowerTerm> classical;
      for (const auto& t : s.terms()) {
        if (t.exponent != 0.0L) {
          classical.push_back({static_cast<double>(t.coefficient * t.exponent), t.exponent - 1.0L});
        }
      }
      detail::record(r, max_coefficient_mismatch(d_alpha(s, 1.0), GeneralizedPowerSeries(0.0, classical)));
    }
  });
}

// All five local operators at order parameter 1 against f'.
[[nodiscard]] inline CheckResult check_local_alpha_one(const HarnessConfig& cfg) {
  return detail::run_check("alpha_one_local", cfg.local_reduction_tol, [&](CheckResult& r) {
    Rng rng(cfg.seed ^ 0x03);
    const FractalityParams classical;  // alpha = zeta = q = 1
    for (int i = 0; i < cfg.random_instances; ++i) {
      const ExprAst f = parse(random_smooth_expression(rng));
      const double x = round_sig(rng.uniform(0.25, 4.0));
      const double fp = diff(f)(x);
      for (OperatorKind k : kAllOperatorKinds) {
        detail::record(r, std::fabs(apply_closed(k, classical, f, x) - fp));
      }
    }
  });
}

// The Grunwald-Letnikov oracle at alpha = 1 (extrapolated in h) against f'.
[[nodiscard]] inline CheckResult check_gl_alpha_one(const HarnessConfig& cfg) {
  return detail::run_check("alpha_one_grunwald_letnikov", cfg.classical_tol, [&](CheckResult& r) {
    Rng rng(cfg.seed ^ 0x04);
    for (int i = 0; i < cfg.random_instances; ++i) {
      const ExprAst f = parse(random_smooth_expression(rng));
      const double x = round_sig(rng.uniform(0.5, 4.0));
      detail::record(r, std::fabs(grunwald_letnikov_extrapolated(f, 1.0, x, 1e-4) - diff(f)(x)));
    }
  });
}

[[nodiscard]] inline CheckResult check_caputo_constant(const HarnessConfig& cfg) {
  return detail::run_check("caputo_constant", cfg.quadrature.abs_tol, [&](CheckResult& r) {
    for (double a : cfg.power_alphas) {
      for (double c : {1.0, -2.5, 7.0}) {
        detail::record(r, std::fabs(caputo(expr::constant(c), a, 1.0, cfg.quadrature)));
      }
    }
  });
}

// Caputo applied to the 60-term series of E_alpha(t^alpha) returns E_alpha(x^alpha).
[[nodiscard]] inline CheckResult check_caputo_eigen_crosscheck(const HarnessConfig& cfg) {
  return detail::run_check("caputo_eigen_crosscheck", cfg.crosscheck_tol, [&](CheckResult& r) {
    for (double a : {0.5, 0.9}) {
      const ExprAst f = to_expr(ml_series(a, 1.0, 60));
      for (double x : {0.25, 0.5, 1.0, 1.5, 2.0}) {
        const double expected = mittag_leffler(MlArgs{a, 1.0, std::pow(x, a)}).value;
        detail::record(r, std::fabs(caputo(f, a, x, cfg.quadrature) - expected));
      }
    }
  });
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

[[nodiscard]] inline SuiteReport run_axiom_suite(const HarnessConfig& cfg) {
  validate(cfg);
  SuiteReport out;
  out.seed = cfg.seed;
  out.ladder = cfg.ladder.to_string();

  out.checks.push_back(check_linearity(cfg));
  out.checks.push_back(check_power_rule(cfg));
  out.checks.push_back(check_constant_annihilation(cfg));
  out.checks.push_back(check_eigenfunction(cfg));
  out.checks.push_back(check_axiomatic_alpha_one(cfg));
  out.checks.push_back(check_local_alpha_one(cfg));
  out.checks.push_back(check_gl_alpha_one(cfg));
  out.checks.push_back(check_caputo_constant(cfg));
  out.checks.push_back(check_caputo_eigen_crosscheck(cfg));

  for (std::size_t i = 0; i < cfg.leibniz.size(); ++i) {
    out.reports.push_back(leibniz_scan(cfg.leibniz[i], cfg.ladder, cfg.leibniz_slope_band, cfg.min_r2,
                                       "leibniz/" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < cfg.chain.size(); ++i) {
    out.reports.push_back(chain_scan(cfg.chain[i], cfg.ladder, cfg.chain_min_slope, cfg.min_r2,
                                     "chain/" + std::to_string(i)));
  }
  for (std::size_t i = 0; i < cfg.gap.size(); ++i) {
    out.reports.push_back(gap_scan(cfg.gap[i], cfg.ladder, cfg.gap_slope_band, cfg.min_r2, cfg.quadrature,
                                   "caputo-gap/" + std::to_string(i)));
  }
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const auto& l, const auto& r) { return l.case_id < r.case_id; });
  return out;
}

// ---------------------------------------------------------------------------
// Serialisation
// ---------------------------------------------------------------------------

[[nodiscard]] inline nlohmann::ordered_json to_json(const DefectReport& r) {
  nlohmann::ordered_json j;
  j["case_id"] = r.case_id;
  j["rule"] = std::string(to_string(r.rule));
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  j["params"] = params;
  j["replay"] = r.replay;
  j["alpha"] = r.alphas;
  j["one_minus_alpha"] = r.one_minus_alpha;
  j["defect"] = r.magnitudes;
  j["slope"] = r.fit.slope;
  j["intercept"] = r.fit.intercept;
  j["r2"] = r.fit.r2;
  j["band"] = {r.band.lo, std::isinf(r.band.hi) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.band.hi)};
  j["min_r2"] = r.min_r2;
  j["verdict"] = r.pass ? "pass" : "fail";
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const CheckResult& c) {
  nlohmann::ordered_json j;
  j["name"] = c.name;
  j["cases"] = c.cases;
  j["max_error"] = c.max_error;
  j["tolerance"] = c.tolerance;
  j["verdict"] = c.pass ? "pass" : "fail";
  if (!c.error.empty()) j["error"] = c.error;
  return j;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const SuiteReport& s) {
  nlohmann::ordered_json j;
  j["schema"] = "metriq v1";
  j["seed"] = s.seed;
  j["ladder"] = s.ladder;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : s.checks) j["checks"].push_back(to_json(c));
  j["reports"] = nlohmann::ordered_json::array();
  for (const auto& r : s.reports) j["reports"].push_back(to_json(r));
  const auto checks_passed = std::count_if(s.checks.begin(), s.checks.end(), [](const auto& c) { return c.pass; });
  const auto reports_passed = std::count_if(s.reports.begin(), s.reports.end(), [](const auto& r) { return r.pass; });
  j["summary"] = {{"checks_passed", checks_passed},
                  {"checks_total", s.checks.size()},
                  {"reports_passed", reports_passed},
                  {"reports_total", s.reports.size()},
                  {"all_pass", s.all_pass()}};
  return j;
}

// Aligned plain-text table for terminals.
[[nodiscard]] inline std::string to_text(const SuiteReport& s) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "seed %llu, ladder %s\n\n", static_cast<unsigned long long>(s.seed),
                s.ladder.c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-30s %6s %12s %12s  %s\n", "check", "cases", "max_error", "tolerance", "verdict");
  out += line;
  for (const auto& c : s.checks) {
    std::snprintf(line, sizeof(line), "%-30s %6d %12.3e %12.3e  %s%s%s\n", c.name.c_str(), c.cases, c.max_error,
                  c.tolerance, c.pass ? "pass" : "FAIL", c.error.empty() ? "" : "  ", c.error.c_str());
    out += line;
  }
  out += '\n';
  std::snprintf(line, sizeof(line), "%-16s %-12s %9s %9s %17s  %s\n", "case", "rule", "slope", "r2", "band", "verdict");
  out += line;
  for (const auto& r : s.reports) {
    char band[48];
    if (std::isinf(r.band.hi)) {
      std::snprintf(band, sizeof(band), ">= %.3f", r.band.lo);
    } else {
      std::snprintf(band, sizeof(band), "[%.3f, %.3f]", r.band.lo, r.band.hi);
    }
    std::snprintf(line, sizeof(line), "%-16s %-12s %9.4f %9.5f %17s  %s%s%s\n", r.case_id.c_str(),
                  std::string(to_string(r.rule)).c_str(), r.fit.slope, r.fit.r2, band, r.pass ? "pass" : "FAIL",
                  r.error.empty() ? "" : "  ", r.error.c_str());
    out += line;
  }
  out += '\n';
  out += s.all_pass() ? "all checks passed\n" : "FAILURES present\n";
  return out;
}

}  // namespace metriq
