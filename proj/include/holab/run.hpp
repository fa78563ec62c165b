#ifndef HOLAB_RUN_HPP
#define HOLAB_RUN_HPP

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "holab/groupoid_core.hpp"
#include "holab/report.hpp"
#include "holab/scenario.hpp"

namespace holab {

struct RunOptions {
  std::uint64_t seed = 0;
  double tol_scale = 1.0;
};

struct RunResult {
  Json report;
  std::string text;
  bool pass = true;
};

namespace run_detail {

inline std::string num_str(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Collects check outcomes for both the JSON report and the text summary.
class CheckSink {
public:
  void add(const std::string& name, bool pass, double value, double tolerance,
           Json extra = Json::object()) {
    extra["name"] = name;
    extra["pass"] = pass;
    extra["value"] = value;
    extra["tolerance"] = tolerance;
    checks_.push_back(extra);
    text_ += std::string(pass ? "PASS  " : "FAIL  ") + name + ": " + num_str(value) +
             " (tol " + num_str(tolerance) + ")\n";
    pass_ = pass_ && pass;
  }

  void add_bool(const std::string& name, bool pass, const std::string& detail,
                Json extra = Json::object()) {
    extra["name"] = name;
    extra["pass"] = pass;
    extra["detail"] = detail;
    checks_.push_back(extra);
    text_ += std::string(pass ? "PASS  " : "FAIL  ") + name + ": " + detail + "\n";
    pass_ = pass_ && pass;
  }

  void note(const std::string& line) { text_ += "      " + line + "\n"; }

  const Json& checks() const { return checks_; }
  const std::string& text() const { return text_; }
  bool pass() const { return pass_; }

private:
  Json checks_ = Json::array();
  std::string text_;
  bool pass_ = true;
};

inline Vector random_ball_vector(std::mt19937_64& gen, int dim, double radius) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(dim);
  for (;;) {
    for (int i = 0; i < dim; ++i) v(i) = dist(gen);
    if (v.norm() <= 1.0) return radius * v;
  }
}

// --- lie_pair commands ---

inline void cmd_bott(const LiePair& pair, const ToleranceSet& tol, std::uint64_t seed,
                     CheckSink& sink, Json& data) {
  const int p = pair.sub_dim();
  Json mats = Json::array();
  for (int i = 0; i < p; ++i)
    mats.push_back(detail::matrix_to_json(pair.bott(Vector(Vector::Unit(p, i)))));
  data["bott"] = mats;

  double flat = 0.0;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j)
      flat = std::max(flat, pair.bott_flatness_residual(Vector(Vector::Unit(p, i)),
                                                        Vector(Vector::Unit(p, j))));
  std::mt19937_64 gen(seed ^ 0x626f7474ULL);
  for (int t = 0; t < 100; ++t) {
    Vector b1 = random_ball_vector(gen, p, 1.0);
    Vector b2 = random_ball_vector(gen, p, 1.0);
    flat = std::max(flat, pair.bott_flatness_residual(b1, b2));
  }
  sink.add("bott.flatness_max_residual", flat <= tol.flatness, flat, tol.flatness);

  double lin = 0.0;
  for (int t = 0; t < 20; ++t) {
    Vector b1 = random_ball_vector(gen, p, 1.0);
    Vector b2 = random_ball_vector(gen, p, 1.0);
    double lam = 0.3 + 0.07 * t;
    lin = std::max(lin, (pair.bott(Vector(lam * b1 + b2)) -
                         (lam * pair.bott(b1) + pair.bott(b2)))
                            .norm());
  }
  sink.add("bott.linearity_residual", lin <= tol.linearity, lin, tol.linearity);
}

inline void cmd_differentiate(const LiePair& pair, const ToleranceSet& tol, CheckSink& sink,
                              Json& data) {
  const int p = pair.sub_dim();
  Json per_basis = Json::array();
  for (int i = 0; i < p; ++i) {
    Vector b = Vector::Unit(p, i);
    Matrix target = pair.bott(b);
    double err = operator_norm(pair.differentiate_rep(b, 1e-4) - target);
    sink.add("differentiate.match_b" + std::to_string(i), err <= tol.diff_match, err,
             tol.diff_match);

    double e1 = operator_norm(pair.differentiate_rep(b, 1e-3) - target);
    double e2 = operator_norm(pair.differentiate_rep(b, 5e-4) - target);
    Json entry;
    entry["basis_index"] = i;
    entry["err_1e-4"] = err;
    entry["err_1e-3"] = e1;
    entry["err_5e-4"] = e2;
    if (e2 >= 1e-11) {
      double ratio = e1 / e2;
      entry["ratio"] = ratio;
      sink.add("differentiate.order_ratio_b" + std::to_string(i),
               ratio >= tol.ratio_lo && ratio <= tol.ratio_hi, ratio, tol.ratio_hi,
               Json{{"lo", tol.ratio_lo}, {"hi", tol.ratio_hi}});
    } else {
      entry["ratio"] = nullptr;
      sink.add_bool("differentiate.order_ratio_b" + std::to_string(i), true,
                    "degenerate: error at rounding level, ratio not meaningful");
    }
    per_basis.push_back(entry);
  }
  data["differentiate"] = per_basis;
}

inline void cmd_holonomy(const SliceChart& chart, const std::vector<double>& h_times,
                         const ToleranceSet& tol, std::uint64_t seed, CheckSink& sink,
                         Json& data) {
  const LiePair& pair = chart.pair();
  const int p = pair.sub_dim();
  const int q = pair.quotient_dim();
  Json entries = Json::array();
  for (double t : h_times) {
    for (int i = 0; i < p; ++i) {
      Vector b = Vector::Unit(p, i);
      HolonomyMap map = chi_conj(chart, HWord::single(Vector(t * b)));
      Json entry;
      entry["h"] = map.element;
      entry["linear_part"] = detail::matrix_to_json(map.linear_part);
      entry["failed_samples"] = map.failed_count();
      entries.push_back(entry);

      double base = map.base_sample().ok ? map.base_sample().c_out.norm() : 1.0;
      sink.add("holonomy.base_fixed_t" + num_str(t) + "_b" + std::to_string(i), base == 0.0,
               base, 0.0);
      double anchor = (map.linear_part - pair.exp_ad_rep(b, t)).norm();
      sink.add("holonomy.jet_vs_adjoint_t" + num_str(t) + "_b" + std::to_string(i),
               anchor <= tol.linear_anchor, anchor, tol.linear_anchor);
    }
  }
  data["holonomy"] = entries;

  std::mt19937_64 gen(seed ^ 0x6d6f7270ULL);
  auto pts = detail::axis_stencil(q, 0.1 * chart.radius(), true);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    HWord h1 = HWord::single(random_ball_vector(gen, p, 0.3));
    HWord h2 = HWord::single(random_ball_vector(gen, p, 0.3));
    HWord h21 = HWord::concat(h2, h1);
    for (const auto& c : pts) {
      Vector once = chi_conj_point(chart, h21, c);
      Vector twice = chi_conj_point(chart, h2, chi_conj_point(chart, h1, c));
      worst = std::max(worst, (once - twice).norm());
    }
  }
  sink.add("holonomy.morphism_law", worst <= tol.morphism, worst, tol.morphism);
}

inline void cmd_agree(const SliceChart& chart, const ToleranceSet& tol, std::uint64_t seed,
                      CheckSink& sink) {
  const LiePair& pair = chart.pair();
  const int p = pair.sub_dim();
  const int q = pair.quotient_dim();
  std::vector<HWord> hs;
  for (int i = 0; i < p; ++i) {
    hs.push_back(HWord::single(Vector(0.3 * Vector::Unit(p, i))));
    hs.push_back(HWord::single(Vector(-0.3 * Vector::Unit(p, i))));
  }
  std::mt19937_64 gen(seed ^ 0x61677265ULL);
  for (int t = 0; t < 5; ++t) hs.push_back(HWord::single(random_ball_vector(gen, p, 0.3)));

  // Nine deterministic grid points per element plus the axis stencil.
  std::vector<Vector> pts = detail::axis_stencil(q, 0.1 * chart.radius(), true);
  auto extra = detail::random_ball(q, 0.1 * chart.radius(), 9, seed ^ 0x39707473ULL);
  pts.insert(pts.end(), extra.begin(), extra.end());

  double worst = 0.0;
  for (const auto& h : hs)
    for (const auto& c : pts)
      worst = std::max(worst,
                       (chi_bisection_point(chart, h, c) - chi_conj_point(chart, h, c)).norm());
  sink.add("agree.bisection_vs_conjugation", worst <= tol.agree, worst, tol.agree);
}

inline void cmd_normality(const SliceChart& chart, const ToleranceSet& tol, std::uint64_t seed,
                          CheckSink& sink, Json& data) {
  NormalityReport rep = normality_equivalence(chart, 20, seed ^ 0x6e6f726dULL);
  Json entry;
  entry["ideal"] = rep.ideal;
  entry["ideal_residual"] = rep.ideal_residual;
  entry["chi_trivial"] = rep.chi_trivial;
  entry["chi_max_dev"] = rep.chi_max_dev;
  if (!rep.ideal || !rep.chi_trivial) {
    entry["witness_element"] = rep.witness_element;
    entry["witness_point"] = detail::vector_to_json(rep.witness_point);
    entry["witness_dev"] = rep.witness_dev;
  }
  data["normality"] = entry;
  (void)tol;
  sink.add_bool("normality.ideal_iff_chi_trivial", rep.consistent,
                std::string("ideal=") + (rep.ideal ? "true" : "false") +
                    ", chi_trivial=" + (rep.chi_trivial ? "true" : "false"));
}

inline void cmd_rightinv(const SliceChart& chart, const ToleranceSet& tol, std::uint64_t seed,
                         CheckSink& sink) {
  const LiePair& pair = chart.pair();
  const int p = pair.sub_dim();
  const int k = pair.ambient_dim();
  double worst = 0.0;
  for (int i = 0; i < p; ++i) {
    Vector hb = Vector::Unit(p, i);
    double hn = pair.coord_norm(pair.embed_sub(hb));
    HWord h = HWord::single(Vector((0.2 / hn) * hb));
    for (int j = 0; j < k; ++j) {
      Vector gc = Vector::Unit(k, j);
      double gn = pair.coord_norm(gc);
      GroupElement g = GroupElement::from_algebra(pair, (0.1 / gn) * gc);
      worst = std::max(worst, right_invariance_check(chart, h, g));
    }
  }
  std::mt19937_64 gen(seed ^ 0x72696e76ULL);
  for (int t = 0; t < 5; ++t) {
    HWord h = HWord::single(random_ball_vector(gen, p, 0.25));
    GroupElement g = GroupElement::from_algebra(pair, random_ball_vector(gen, k, 0.15));
    worst = std::max(worst, right_invariance_check(chart, h, g));
  }
  sink.add("rightinv.max_residual", worst <= tol.rightinv, worst, tol.rightinv);
}

// --- foliation commands ---

inline std::vector<std::string> offset_names(int m) {
  if (m == 1) return {"y"};
  std::vector<std::string> names;
  for (int i = 1; i <= m; ++i) names.push_back("y" + std::to_string(i));
  return names;
}

struct FoliationSetup {
  FoliationModel model;
  LeafwisePath path;
  TransverseSlice slice0, slice1;
};

inline FoliationSetup foliation_setup(const FoliationSpec& spec, const FoliationModel& model,
                                      const PathSpec& ps) {
  LeafwisePath path = ps.build();
  if (model.variant() == FoliationModel::Variant::ode_graph) {
    const int n = model.dim();
    Vector y0 = spec.base.tail(n - 1);
    TransverseSlice s0 = vertical_slice(n, path.x0, y0);
    Vector y1 = detail::flow_graph(model, path.x0, path.x1, y0, spec.rk_tol);
    TransverseSlice s1 = vertical_slice(n, path.x1, y1);
    return FoliationSetup{model, path, s0, s1};
  }
  TransverseSlice s0(spec.slice0_base, spec.slice0_dirs);
  TransverseSlice s1(spec.slice1_base, spec.slice1_dirs);
  return FoliationSetup{model, path, s0, s1};
}

inline void cmd_foliation(const FoliationSpec& spec, const FoliationModel& model,
                          const ToleranceSet& tol, std::uint64_t seed, CheckSink& sink,
                          Json& data) {
  TransportOptions opts;
  opts.radius = spec.sample_radius;
  opts.random_count = spec.random_count;
  opts.seed = seed ^ 0x666f6cULL;
  opts.rk_tol = spec.rk_tol;

  Json path_reports = Json::array();
  for (size_t pi = 0; pi < spec.paths.size(); ++pi) {
    const std::string tag = "path" + std::to_string(pi);
    FoliationSetup setup = foliation_setup(spec, model, spec.paths[pi]);
    HolonomyMap map = holonomy_transport(setup.model, setup.path, setup.slice0, setup.slice1, opts);
    Matrix varia = linear_holonomy_variational(setup.model, setup.path, setup.slice0,
                                               setup.slice1, opts.rk_tol);
    double bott_res = operator_norm(map.linear_part - varia);

    Json rep;
    rep["path"] = static_cast<int>(pi);
    rep["linear_part"] = detail::matrix_to_json(map.linear_part);
    rep["variational"] = detail::matrix_to_json(varia);
    rep["failed_samples"] = map.failed_count();
    Json samples = Json::array();
    for (const auto& smp : map.samples) {
      Json sj;
      sj["in"] = detail::vector_to_json(smp.c_in);
      if (smp.ok) sj["out"] = detail::vector_to_json(smp.c_out);
      else sj["error"] = smp.err;
      samples.push_back(sj);
    }
    rep["samples"] = samples;
    path_reports.push_back(rep);

    sink.add("foliation." + tag + ".bott_transport", bott_res <= tol.bott_transport, bott_res,
             tol.bott_transport);

    if (!spec.expected_map.empty()) {
      const int m = model.normal_dim();
      std::vector<Expr> exprs;
      for (const auto& src : spec.expected_map)
        exprs.push_back(Expr::parse(src, offset_names(m)));
      double worst = 0.0;
      for (const auto& smp : map.samples) {
        if (!smp.ok) continue;
        Vector want(m);
        for (int i = 0; i < m; ++i) want(i) = exprs[static_cast<size_t>(i)].eval(smp.c_in);
        worst = std::max(worst, (smp.c_out - want).norm());
      }
      sink.add("foliation." + tag + ".map_vs_closed_form", worst <= tol.fol_map, worst,
               tol.fol_map);
    }
    if (spec.expected_linear.size() > 0) {
      double dev = (map.linear_part - spec.expected_linear).norm();
      sink.add("foliation." + tag + ".linear_vs_closed_form", dev <= tol.fol_linear, dev,
               tol.fol_linear);
    }
    if (spec.expected_variational.size() > 0) {
      double dev = (varia - spec.expected_variational).norm();
      sink.add("foliation." + tag + ".variational_vs_closed_form", dev <= tol.fol_variational,
               dev, tol.fol_variational);
    }
  }
  data["foliation"] = path_reports;
}

inline void cmd_pairdemo(const FoliationSpec& spec, const FoliationModel& model,
                         const ToleranceSet& tol, std::uint64_t seed, CheckSink& sink,
                         Json& data) {
  if (model.variant() != FoliationModel::Variant::ode_graph)
    throw schema_error("pairdemo requires an ode_graph foliation");
  TransportOptions opts;
  opts.radius = spec.sample_radius;
  opts.random_count = spec.random_count;
  opts.seed = seed ^ 0x70616972ULL;
  opts.rk_tol = spec.rk_tol;

  Json reports = Json::array();
  for (size_t pi = 0; pi < spec.paths.size(); ++pi) {
    const std::string tag = "path" + std::to_string(pi);
    FoliationSetup setup = foliation_setup(spec, model, spec.paths[pi]);
    PairGroupoidReport rep =
        pair_groupoid_demo(setup.model, setup.path, setup.slice0, setup.slice1, opts);
    Json rj;
    rj["path"] = static_cast<int>(pi);
    rj["max_pointwise_dev"] = rep.max_pointwise_dev;
    rj["reversal_residual"] = rep.reversal_residual;
    rj["compared_samples"] = rep.compared_samples;
    reports.push_back(rj);
    sink.add("pairdemo." + tag + ".fiber_vs_direct", rep.max_pointwise_dev <= tol.pairdemo,
             rep.max_pointwise_dev, tol.pairdemo);
    sink.add("pairdemo." + tag + ".reversal", rep.reversal_residual <= tol.reversal,
             rep.reversal_residual, tol.reversal);
  }
  data["pairdemo"] = reports;
}

}  // namespace run_detail

inline const std::set<std::string>& known_commands() {
  static const std::set<std::string> cmds{"bott",      "holonomy", "agree",
                                          "differentiate", "normality", "rightinv",
                                          "foliation", "pairdemo", "all"};
  return cmds;
}

/// Runs one command against a scenario and assembles the machine-readable
/// report plus the text summary. Structural problems (wrong command for the
/// scenario kind) raise schema_error; numeric failures only clear `pass`.
inline RunResult run_scenario(const Scenario& scenario, const std::string& command,
                              const RunOptions& options = {}) {
  using namespace run_detail;
  if (!known_commands().count(command))
    throw schema_error("unknown command '" + command + "'");

  const ToleranceSet tol = scenario.tol.scaled(options.tol_scale);
  CheckSink sink;
  Json data = Json::object();
  Json skipped = Json::array();

  static const std::set<std::string> lie_cmds{"bott", "differentiate", "holonomy",
                                              "agree", "normality", "rightinv"};
  static const std::set<std::string> fol_cmds{"foliation", "pairdemo"};

  // Construction failures are scenario-content problems, not numeric ones.
  auto validate = [](auto&& build) {
    try {
      return build();
    } catch (const schema_error&) {
      throw;
    } catch (const std::exception& e) {
      throw schema_error(std::string("scenario validation: ") + e.what());
    }
  };

  if (scenario.kind == "lie_pair") {
    if (fol_cmds.count(command))
      throw schema_error("command '" + command + "' needs a foliation scenario");
    LiePair pair = validate([&] { return scenario.lie.build(scenario.name); });
    const bool all = command == "all";
    const bool matrix = pair.matrix_backed();

    if (all || command == "bott") cmd_bott(pair, tol, options.seed, sink, data);
    if (all || command == "differentiate") cmd_differentiate(pair, tol, sink, data);

    auto group_cmd = [&](const std::string& name) {
      return all || command == name;
    };
    if (group_cmd("holonomy") || group_cmd("agree") || group_cmd("normality") ||
        group_cmd("rightinv")) {
      if (!matrix) {
        if (!all)
          throw schema_error("command '" + command +
                             "' requires a matrix realization; this scenario has only "
                             "structure constants");
        skipped.push_back("holonomy/agree/normality/rightinv: no matrix realization");
        sink.note("skipped group-side checks: structure-constants-only scenario");
      } else {
        SliceChart chart(pair, scenario.lie.slice_radius);
        if (group_cmd("holonomy"))
          cmd_holonomy(chart, scenario.lie.h_times, tol, options.seed, sink, data);
        if (group_cmd("agree")) cmd_agree(chart, tol, options.seed, sink);
        if (group_cmd("normality")) cmd_normality(chart, tol, options.seed, sink, data);
        if (group_cmd("rightinv")) cmd_rightinv(chart, tol, options.seed, sink);
      }
    }
  } else if (scenario.kind == "foliation") {
    if (lie_cmds.count(command))
      throw schema_error("command '" + command + "' needs a lie_pair scenario");
    FoliationModel model = validate([&] { return scenario.fol.build(); });
    const bool all = command == "all";
    if (all || command == "foliation")
      cmd_foliation(scenario.fol, model, tol, options.seed, sink, data);
    if (command == "pairdemo" ||
        (all && model.variant() == FoliationModel::Variant::ode_graph))
      cmd_pairdemo(scenario.fol, model, tol, options.seed, sink, data);
    else if (all && model.variant() != FoliationModel::Variant::ode_graph)
      skipped.push_back("pairdemo: spanned model");
  } else {
    throw schema_error("unknown scenario kind '" + scenario.kind + "'");
  }

  RunResult result;
  result.pass = sink.pass();
  result.report["scenario"] = scenario.name;
  result.report["kind"] = scenario.kind;
  result.report["command"] = command;
  result.report["seed"] = options.seed;
  result.report["tol_scale"] = options.tol_scale;
  result.report["checks"] = sink.checks();
  result.report["data"] = data;
  result.report["skipped"] = skipped;
  result.report["pass"] = result.pass;

  result.text = "holab report: scenario=" + scenario.name + " command=" + command +
                " seed=" + std::to_string(options.seed) + "\n" + sink.text() +
                std::string("RESULT: ") + (result.pass ? "PASS" : "FAIL") + "\n";
  return result;
}

}  // namespace holab

#endif
