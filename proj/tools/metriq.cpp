// metriq: command-line front end.
//
// Exit codes: 0 success, 1 numeric failure (JSON error object on stdout),
// 2 usage error (message on stderr). `verify` also exits 1 when any check fails.

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "metriq/metriq.hpp"

namespace {

using namespace metriq;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutputSpec {
  std::string format = "csv";
  std::string output;
  int precision = 12;
};

void add_common(CLI::App* cmd, OutputSpec& c, bool allow_svg) {
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember(allow_svg ? std::vector<std::string>{"csv", "json", "svg"}
                                      : std::vector<std::string>{"csv", "json"}));
  cmd->add_option("--output", c.output, "Output file (default: standard output)");
  cmd->add_option("--precision", c.precision, "Decimal digits")->check(CLI::Range(1, 17));
}

void emit(const std::string& text, const OutputSpec& c) {
  if (c.output.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(c.output, std::ios::binary);
  if (!out) throw UsageError("cannot open output file '" + c.output + "'");
  out << text;
}

void emit_table(const Table& t, const OutputSpec& c, std::size_t svg_x = 0, std::size_t svg_y = 1) {
  if (c.format == "json") {
    emit(to_json(t).dump(2) + "\n", c);
  } else if (c.format == "svg") {
    emit(to_svg(t, svg_x, svg_y), c);
  } else {
    emit(to_csv(t, c.precision), c);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

OperatorKind parse_kind(const std::string& name) {
  const auto k = operator_kind_from_string(name);
  if (!k) throw UsageError("unknown operator '" + name + "'");
  return *k;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* env = std::getenv("METRIQ_SEED");
  if (env == nullptr || *env == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string_view s(env);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("METRIQ_SEED must be an unsigned integer");
  return v;
}

Table defect_table(const DefectReport& r) {
  Table t;
  t.meta = {{"case_id", r.case_id}, {"rule", std::string(to_string(r.rule))}};
  for (const auto& p : r.params) t.meta.push_back(p);
  t.meta.push_back({"slope", format_value(r.fit.slope)});
  t.meta.push_back({"r2", format_value(r.fit.r2)});
  t.meta.push_back({"verdict", r.pass ? "pass" : "fail"});
  if (!r.error.empty()) t.meta.push_back({"error", r.error});
  t.add_column("alpha", r.alphas);
  t.add_column("one_minus_alpha", r.one_minus_alpha);
  t.add_column("defect", r.magnitudes);
  return t;
}

void emit_defect(const DefectReport& r, const OutputSpec& c) {
  if (c.format == "json") {
    emit(to_json(r).dump(2) + "\n", c);
  } else {
    emit_table(defect_table(r), c);
  }
}

Table solve_table(const SolveResult& r, const std::vector<std::pair<std::string, std::string>>& meta) {
  Table t;
  t.meta = meta;
  t.meta.push_back({"max_rel_err", format_value(r.max_rel_err)});
  t.add_column("x", r.grid);
  t.add_column("y", r.y);
  t.add_column("reference", r.reference);
  return t;
}

int run(int argc, char** argv) {
  CLI::App app{"Deformed-calculus toolkit: local and nonlocal fractional derivatives", "metriq"};
  app.require_subcommand(1);

  // mlf
  OutputSpec mlf_out;
  double ml_alpha = 1.0, ml_beta = 1.0, ml_z = 0.0;
  auto* mlf = app.add_subcommand("mlf", "Mittag-Leffler function E_{alpha,beta}(z)");
  mlf->add_option("--alpha", ml_alpha)->required();
  mlf->add_option("--beta", ml_beta);
  mlf->add_option("--z", ml_z)->required();
  add_common(mlf, mlf_out, false);

  // deriv
  OutputSpec deriv_out;
  std::string d_op, d_f;
  double d_x = 0.0;
  FractalityParams d_p;
  std::optional<double> d_eps;
  auto* deriv = app.add_subcommand("deriv", "Local metric derivative of an expression");
  deriv->add_option("--op", d_op)->required();
  deriv->add_option("--f", d_f)->required();
  deriv->add_option("--x", d_x)->required();
  deriv->add_option("--alpha", d_p.alpha);
  deriv->add_option("--zeta", d_p.zeta);
  deriv->add_option("--q", d_p.q);
  deriv->add_option("--l0", d_p.l0);
  deriv->add_option("--c1", d_p.c1);
  deriv->add_option("--limit-eps", d_eps, "Also evaluate the finite-eps limit definition");
  add_common(deriv, deriv_out, false);

  // axiomatic
  OutputSpec ax_out;
  std::string ax_series, ax_file;
  double ax_alpha = 1.0;
  std::optional<double> ax_at;
  auto* axiomatic = app.add_subcommand("axiomatic", "Axiomatic derivative of a generalized power series");
  auto* series_opt = axiomatic->add_option("--series", ax_series, "Literal such as 'a=0; 1@0, 2.5@0.9'");
  auto* file_opt = axiomatic->add_option("--series-file", ax_file, "File holding a series literal");
  series_opt->excludes(file_opt);
  axiomatic->add_option("--alpha", ax_alpha)->required();
  axiomatic->add_option("--at", ax_at, "Evaluate the result at this point");
  add_common(axiomatic, ax_out, false);

  // eigen
  OutputSpec eig_out;
  double e_alpha = 1.0, e_lambda = 1.0;
  int e_terms = 30;
  auto* eigen = app.add_subcommand("eigen", "Eigenfunction check of the Mittag-Leffler series");
  eigen->add_option("--alpha", e_alpha)->required();
  eigen->add_option("--lambda", e_lambda)->required();
  eigen->add_option("--terms", e_terms)->required();
  add_common(eigen, eig_out, false);

  // defect
  auto* defect = app.add_subcommand("defect", "Defect scan along an alpha ladder");
  defect->require_subcommand(1);
  OutputSpec def_out;
  std::string ladder_text = AlphaLadder{}.to_string();
  double band = 0.05, min_r2 = 0.98, min_slope = 0.9, gap_band = 0.1;

  LeibnizCase lc;
  auto* leibniz = defect->add_subcommand("leibniz", "Leibniz defect on t^mu * t^nu");
  leibniz->add_option("--mu", lc.mu)->required();
  leibniz->add_option("--nu", lc.nu)->required();
  leibniz->add_option("--x", lc.x);
  leibniz->add_option("--ladder", ladder_text, "k1..k2 for alpha = 1 - 2^-k");
  leibniz->add_option("--band", band);
  add_common(leibniz, def_out, false);

  ChainCase cc;
  auto* chain = defect->add_subcommand("chain", "Chain-rule defect of f(w(t))");
  chain->add_option("--f", cc.f)->required();
  chain->add_option("--w", cc.w, "Inner series literal")->required();
  chain->add_option("--x0", cc.x0);
  chain->add_option("--ladder", ladder_text);
  chain->add_option("--min-slope", min_slope);
  add_common(chain, def_out, false);

  GapCase gc;
  std::string gap_op = "conformable";
  QuadratureSpec gap_quad;
  auto* gap = defect->add_subcommand("caputo-gap", "Gap between a local operator and Caputo");
  gap->add_option("--f", gc.f)->required();
  gap->add_option("--op", gap_op);
  gap->add_option("--x", gc.x);
  gap->add_option("--ladder", ladder_text);
  gap->add_option("--band", gap_band);
  gap->add_option("--abs-tol", gap_quad.abs_tol);
  add_common(gap, def_out, false);
  for (auto* sub : {leibniz, chain, gap}) sub->add_option("--min-r2", min_r2);

  // solve
  auto* solve = app.add_subcommand("solve", "Eigen-equation D y = lambda y, y(0) = 1");
  solve->require_subcommand(1);
  OutputSpec solve_out;
  double s_lambda = 1.0, s_x_end = 1.0, s_h = 1e-3;

  std::string sl_op = "hausdorff-scale";
  FractalityParams sl_p;
  auto* solve_local_cmd = solve->add_subcommand("local", "Local operator, RK4 in the regularising coordinate");
  solve_local_cmd->add_option("--op", sl_op);
  solve_local_cmd->add_option("--alpha", sl_p.alpha);
  solve_local_cmd->add_option("--zeta", sl_p.zeta);
  solve_local_cmd->add_option("--q", sl_p.q);
  solve_local_cmd->add_option("--l0", sl_p.l0);
  solve_local_cmd->add_option("--c1", sl_p.c1);

  double sc_alpha = 0.9;
  auto* solve_caputo_cmd = solve->add_subcommand("caputo", "Caputo derivative, fractional Adams-Bashforth-Moulton");
  solve_caputo_cmd->add_option("--alpha", sc_alpha)->required();

  for (auto* sub : {solve_local_cmd, solve_caputo_cmd}) {
    sub->add_option("--lambda", s_lambda);
    sub->add_option("--x-end", s_x_end);
    sub->add_option("--step", s_h, "Step size h");
    add_common(sub, solve_out, true);
  }

  // verify
  std::string v_config, v_format = "json", v_output;
  auto* verify = app.add_subcommand("verify", "Run the full verification suite");
  verify->add_option("--config", v_config, "JSON config overriding the defaults");
  verify->add_option("--format", v_format)->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--output", v_output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*mlf) {
    const MlValue v = mittag_leffler(MlArgs{ml_alpha, ml_beta, ml_z});
    Table t;
    t.add_column("alpha", {ml_alpha});
    t.add_column("beta", {ml_beta});
    t.add_column("z", {ml_z});
    t.add_column("value", {v.value});
    t.add_column("error_bound", {v.error_bound});
    t.add_column("terms", {static_cast<double>(v.terms)}, true);
    emit_table(t, mlf_out);
    return 0;
  }

  if (*deriv) {
    const OperatorKind kind = parse_kind(d_op);
    const ExprAst f = parse(d_f);
    Table t;
    t.meta = {{"op", d_op}, {"f", to_string(f)}};
    t.add_column("x", {d_x});
    const double closed = apply_closed(kind, d_p, f, d_x);
    t.add_column("value", {closed});
    if (d_eps) {
      const double lim = apply_limit(kind, d_p, f, d_x, *d_eps);
      t.add_column("eps", {*d_eps});
      t.add_column("limit_value", {lim});
      t.add_column("difference", {lim - closed});
    }
    emit_table(t, deriv_out);
    return 0;
  }

  if (*axiomatic) {
    if (ax_series.empty() && ax_file.empty()) throw UsageError("axiomatic: one of --series or --series-file is required");
    const GeneralizedPowerSeries s = parse_series(ax_file.empty() ? ax_series : read_file(ax_file));
    const GeneralizedPowerSeries d = d_alpha(s, ax_alpha);
    Table t;
    t.meta = {{"series", to_literal(d)}};
    if (ax_at) t.meta.push_back({"value_at_" + detail::format_number(*ax_at), format_value(d(*ax_at), ax_out.precision)});
    std::vector<double> coef, expo;
    for (const auto& term : d.terms()) {
      coef.push_back(term.coefficient);
      expo.push_back(static_cast<double>(term.exponent));
    }
    t.add_column("coefficient", coef);
    t.add_column("exponent", expo);
    if (ax_out.format == "json") {
      auto j = to_json(t);
      j["offset"] = d.offset();
      if (ax_at) {
        j["at"] = *ax_at;
        j["value"] = d(*ax_at);
      }
      emit(j.dump(2) + "\n", ax_out);
    } else {
      emit_table(t, ax_out);
    }
    return 0;
  }

  if (*eigen) {
    const double mismatch = eigen_check(e_alpha, e_lambda, e_terms);
    Table t;
    t.add_column("alpha", {e_alpha});
    t.add_column("lambda", {e_lambda});
    t.add_column("terms", {static_cast<double>(e_terms)}, true);
    t.add_column("max_mismatch", {mismatch});
    emit_table(t, eig_out);
    return 0;
  }

  if (*defect) {
    const AlphaLadder ladder = parse_ladder(ladder_text);
    DefectReport r;
    if (*leibniz) {
      r = leibniz_scan(lc, ladder, band, min_r2);
    } else if (*chain) {
      r = chain_scan(cc, ladder, min_slope, min_r2);
    } else {
      gc.kind = parse_kind(gap_op);
      r = gap_scan(gc, ladder, gap_band, min_r2, gap_quad);
    }
    emit_defect(r, def_out);
    return r.error.empty() ? 0 : 1;
  }

  if (*solve) {
    if (*solve_local_cmd) {
      const OperatorKind kind = parse_kind(sl_op);
      const SolveResult r = solve_local(kind, sl_p, s_lambda, s_x_end, s_h);
      emit_table(solve_table(r, {{"solver", "local"}, {"op", sl_op}}), solve_out);
    } else {
      const SolveResult r = solve_caputo(sc_alpha, s_lambda, s_x_end, s_h);
      emit_table(solve_table(r, {{"solver", "caputo"}, {"alpha", detail::format_number(sc_alpha)}}), solve_out);
    }
    return 0;
  }

  if (*verify) {
    HarnessConfig cfg;
    if (!v_config.empty()) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(v_config));
      } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
      cfg = config_from_json(j);
    }
    if (const auto seed = seed_from_env()) cfg.seed = *seed;
    const SuiteReport report = run_axiom_suite(cfg);
    OutputSpec out;
    out.output = v_output;
    emit(v_format == "text" ? to_text(report) : to_json(report).dump(2) + "\n", out);
    return report.all_pass() ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "metriq: " << e.what() << '\n';
    return 2;
  } catch (const metriq::Error& e) {
    nlohmann::ordered_json j;
    j["error"] = {{"kind", std::string(metriq::to_string(e.kind()))}, {"message", e.what()}};
    if (const auto* se = dynamic_cast<const metriq::SyntaxError*>(&e)) j["error"]["offset"] = se->offset();
    if (const auto* ue = dynamic_cast<const metriq::UnknownIdentifierError*>(&e)) j["error"]["offset"] = ue->offset();
    std::cout << j.dump() << '\n';
    return 1;
  }
}
