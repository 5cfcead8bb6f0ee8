#include <chrono>
#include <cmath>
#include <functional>
#include <set>

#include "capdens/cli.hpp"
#include "capdens/density.hpp"
#include "capdens/errors.hpp"
#include "capdens/kernels.hpp"
#include "capdens/predicates.hpp"
#include "capdens/sets.hpp"
#include "capdens/solver.hpp"

namespace capdens {

namespace {

using nlohmann::json;

[[noreturn]] void rethrow_staged(const Error& e, const std::string& stage) {
  throw Error(e.kind(), e.code(), "stage '" + stage + "': " + e.message());
}

template <class F>
auto staged(const std::string& stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    rethrow_staged(e, stage);
  }
}

void check_param_keys(const json& j, std::set<std::string> allowed, const std::string& variant) {
  allowed.insert("variant");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key()) == 0)
      fail(ErrorKind::config, "unknown-key",
           "unknown key '" + it.key() + "' in experiment '" + variant + "'");
  }
}

NodeSet param_set(const MetricGraph& g, const json& j, const char* key) {
  if (!j.contains(key))
    fail(ErrorKind::config, "missing-key", std::string("experiment needs set '") + key + "'");
  const SetSpec spec = set_from_json(j[key]);
  return staged(std::string("rasterize-") + key, [&] { return rasterize_set(g, spec); });
}

Metric param_metric(const json& j, Metric fallback) {
  if (!j.contains("metric")) return fallback;
  const std::string m = j["metric"].get<std::string>();
  if (m == "ambient") return Metric::ambient;
  if (m == "inner") return Metric::inner;
  fail(ErrorKind::config, "invalid-config", "metric must be 'ambient' or 'inner'");
}

int32_t node_near(const MetricGraph& g, const json& point) {
  std::vector<double> x;
  for (const auto& v : point) x.push_back(v.get<double>());
  if (static_cast<int>(x.size()) != g.dim)
    fail(ErrorKind::config, "invalid-config", "point dimension mismatch");
  return g.nearest_node(x);
}

json coords_json(const MetricGraph& g, int32_t v) {
  json out = json::array();
  if (v < 0) return out;
  for (double c : g.node_coords(v)) out.push_back(c);
  return out;
}

CenterRule parse_centers(const MetricGraph& g, const json& j) {
  CenterRule rule;
  if (!j.contains("centers")) return rule;
  const json& c = j["centers"];
  for (auto it = c.begin(); it != c.end(); ++it) {
    if (it.key() != "stride" && it.key() != "adversarial" && it.key() != "points")
      fail(ErrorKind::config, "unknown-key", "unknown key '" + it.key() + "' in centers");
  }
  if (c.contains("points")) {
    for (const auto& p : c["points"]) rule.explicit_nodes.push_back(node_near(g, p));
  }
  rule.stride_cells = c.value("stride", rule.stride_cells);
  rule.include_adversarial = c.value("adversarial", rule.include_adversarial);
  return rule;
}

json scan_json(const MetricGraph& g, const DensityScan& scan, bool centers_are_nodes = true) {
  json records = json::array();
  for (const auto& r : scan.records) {
    json rec{{"numerator", r.numerator},
             {"denominator", r.denominator},
             {"ratio", r.ratio}};
    if (centers_are_nodes) rec["center"] = coords_json(g, r.center);
    if (!r.error.empty()) rec["error"] = r.error;
    records.push_back(rec);
  }
  json out{{"records", records}, {"min_ratio", scan.min_ratio}};
  if (centers_are_nodes) out["argmin_center"] = coords_json(g, scan.argmin_center);
  out["note"] = "sampled minimum; upper bound of the infimum";
  return out;
}

struct VariantOutput {
  json results;
  json diagnostics;
  std::vector<std::string> warnings;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

VariantOutput run_capacity(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "Omega"}, cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  const NodeSet omega = param_set(g, cfg.experiment, "Omega");
  const auto cap = staged("variational-capacity",
                          [&] { return variational_capacity(g, E, omega, cfg.solver); });
  VariantOutput out;
  out.results = json{{"value", cap.value}};
  out.diagnostics = json{{"iterations", cap.iterations},
                         {"final_residual", cap.final_residual},
                         {"energy_trace", cap.energy_trace}};
  out.warnings = cap.warnings;
  out.columns = {"p", "h", "value", "iterations", "final_residual"};
  out.rows = {{cfg.solver.p, cfg.h, cap.value, static_cast<double>(cap.iterations),
               cap.final_residual}};
  return out;
}

VariantOutput run_potential(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "Omega"}, cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  const NodeSet omega = param_set(g, cfg.experiment, "Omega");
  const auto cap = staged("capacitary-potential",
                          [&] { return variational_capacity(g, E, omega, cfg.solver); });
  VariantOutput out;
  out.results = json{{"value", cap.value}};
  out.diagnostics =
      json{{"iterations", cap.iterations}, {"final_residual", cap.final_residual}};
  out.warnings = cap.warnings;
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("x" + std::to_string(d));
  out.columns.push_back("u");
  for (int32_t v = 0; v < g.node_count(); ++v) {
    std::vector<double> row;
    for (double c : g.node_coords(v)) row.push_back(c);
    row.push_back(cap.potential.values[v]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

VariantOutput run_superlevel(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "Omega", "levels", "strict"}, cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  const NodeSet omega = param_set(g, cfg.experiment, "Omega");
  const bool strict = cfg.experiment.value("strict", true);
  std::vector<double> levels;
  if (cfg.experiment.contains("levels")) {
    for (const auto& l : cfg.experiment["levels"]) levels.push_back(l.get<double>());
  } else {
    levels = {0.25, 0.5, 0.75};
  }

  const auto base = staged("variational-capacity",
                           [&] { return variational_capacity(g, E, omega, cfg.solver); });
  VariantOutput out;
  out.warnings = base.warnings;
  out.columns = {"p", "M", "cap_E", "cap_EM", "ratio", "expected", "rel_error"};
  json per_level = json::array();
  for (double M : levels) {
    const NodeSet em = staged("superlevel-set", [&] {
      return superlevel_set(g, base.potential, M, strict);
    });
    // the rescaled truncation of the base potential is the natural warm start
    std::vector<double> init(base.potential.values.size());
    for (std::size_t i = 0; i < init.size(); ++i)
      init[i] = std::min(base.potential.values[i] / M, 1.0);
    const auto capm = staged("superlevel-capacity", [&] {
      return variational_capacity(g, em, omega, cfg.solver, &init);
    });
    const double ratio = base.value > 0.0 ? capm.value / base.value : 0.0;
    const double expected = std::pow(M, 1.0 - cfg.solver.p);
    const double rel = std::fabs(ratio - expected) / expected;
    out.rows.push_back({cfg.solver.p, M, base.value, capm.value, ratio, expected, rel});
    per_level.push_back(json{{"M", M},
                             {"cap_E", base.value},
                             {"cap_EM", capm.value},
                             {"ratio", ratio},
                             {"expected", expected},
                             {"rel_error", rel}});
  }
  out.results = json{{"levels", per_level}};
  out.diagnostics = json{{"iterations", base.iterations}};
  return out;
}

VariantOutput run_density_scan(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "r", "tau", "metric", "centers", "skip_errors"},
                   cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  DensityParams params;
  params.r = cfg.experiment.value("r", 1.0);
  params.tau = cfg.experiment.value("tau", 2.0);
  if (!(params.tau > 1.0)) fail(ErrorKind::config, "invalid-config", "tau must exceed 1");
  params.metric = param_metric(cfg.experiment, Metric::ambient);
  params.centers = parse_centers(g, cfg.experiment);
  params.solver = cfg.solver;
  params.skip_errors = cfg.experiment.value("skip_errors", false);
  params.threads = cfg.threads;
  const auto scan = staged("density-scan", [&] { return density_scan(g, E, params); });

  VariantOutput out;
  out.results = scan_json(g, scan);
  out.warnings = scan.warnings;
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("center_x" + std::to_string(d));
  out.columns.insert(out.columns.end(), {"numerator", "denominator", "ratio"});
  for (const auto& r : scan.records) {
    if (!r.error.empty()) continue;
    std::vector<double> row;
    for (double c : g.node_coords(r.center)) row.push_back(c);
    row.insert(row.end(), {r.numerator, r.denominator, r.ratio});
    out.rows.push_back(std::move(row));
  }
  return out;
}

VariantOutput run_sobolev_density(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "r", "centers"}, cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  const double r = cfg.experiment.value("r", 1.0);
  CenterRule rule = parse_centers(g, cfg.experiment);
  std::vector<int32_t> centers = rule.explicit_nodes;
  if (centers.empty()) {
    DensityParams probe;
    probe.r = r;
    probe.tau = 1.0;
    probe.centers = rule;
    centers = sample_centers(g, probe);
  }
  const auto scan = staged("sobolev-density-scan", [&] {
    return sobolev_density_scan(g, E, r, centers, cfg.solver, cfg.threads);
  });
  VariantOutput out;
  out.results = scan_json(g, scan);
  out.warnings = scan.warnings;
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("center_x" + std::to_string(d));
  out.columns.insert(out.columns.end(), {"numerator", "denominator", "ratio"});
  for (const auto& rec : scan.records) {
    std::vector<double> row;
    for (double c : g.node_coords(rec.center)) row.push_back(c);
    row.insert(row.end(), {rec.numerator, rec.denominator, rec.ratio});
    out.rows.push_back(std::move(row));
  }
  return out;
}

VariantOutput run_dichotomy(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"E", "radii", "tau", "centers", "skip_errors"}, cfg.variant);
  const NodeSet E = param_set(g, cfg.experiment, "E");
  if (!cfg.experiment.contains("radii"))
    fail(ErrorKind::config, "missing-key", "dichotomy needs 'radii'");
  std::vector<double> radii;
  for (const auto& r : cfg.experiment["radii"]) radii.push_back(r.get<double>());
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1]))
      fail(ErrorKind::config, "invalid-config", "radii ladder must be strictly increasing");
  }

  VariantOutput out;
  out.columns = {"R", "D_min", "D_in_min"};
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("argmin_x" + std::to_string(d));
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("argmin_in_x" + std::to_string(d));
  json ladder = json::array();
  for (double R : radii) {
    DensityParams params;
    params.r = R;
    params.tau = cfg.experiment.value("tau", 2.0);
    params.centers = parse_centers(g, cfg.experiment);
    params.solver = cfg.solver;
    params.skip_errors = cfg.experiment.value("skip_errors", false);
    params.threads = cfg.threads;
    params.metric = Metric::ambient;
    const auto ambient = staged("dichotomy-ambient-scan",
                                [&] { return density_scan(g, E, params); });
    params.metric = Metric::inner;
    const auto inner =
        staged("dichotomy-inner-scan", [&] { return density_scan(g, E, params); });
    std::vector<double> row = {R, ambient.min_ratio, inner.min_ratio};
    for (int d = 0; d < g.dim; ++d)
      row.push_back(ambient.argmin_center >= 0 ? g.node_coords(ambient.argmin_center)[d] : 0.0);
    for (int d = 0; d < g.dim; ++d)
      row.push_back(inner.argmin_center >= 0 ? g.node_coords(inner.argmin_center)[d] : 0.0);
    out.rows.push_back(std::move(row));
    ladder.push_back(json{{"R", R},
                          {"D_min", ambient.min_ratio},
                          {"D_in_min", inner.min_ratio},
                          {"argmin", coords_json(g, ambient.argmin_center)},
                          {"argmin_in", coords_json(g, inner.argmin_center)}});
  }
  out.results = json{{"ladder", ladder}};
  out.warnings.push_back("sampled minima; upper bounds of the infima");
  return out;
}

VariantOutput run_inner_approx(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"U", "Omega", "rho_list"}, cfg.variant);
  const NodeSet U = param_set(g, cfg.experiment, "U");
  const NodeSet omega = param_set(g, cfg.experiment, "Omega");
  std::vector<double> rho_list = {0.0, 0.5, 1.0};
  if (cfg.experiment.contains("rho_list")) {
    rho_list.clear();
    for (const auto& r : cfg.experiment["rho_list"]) rho_list.push_back(r.get<double>());
  }
  const auto probe = staged("inner-approx", [&] {
    return inner_approx_curve(g, U, omega, rho_list, cfg.solver);
  });
  VariantOutput out;
  out.columns = {"rho", "R", "ratio", "phi"};
  json rows = json::array();
  for (const auto& r : probe.rows) {
    out.rows.push_back({r.rho, r.R, r.ratio, r.phi});
    json jr{{"rho", r.rho}, {"R", r.R}, {"ratio", r.ratio}, {"phi", r.phi}};
    if (!r.flag.empty()) jr["flag"] = r.flag;
    rows.push_back(jr);
  }
  out.results = json{{"rows", rows}};
  return out;
}

VariantOutput run_corkscrew(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"U", "r_min", "r_max", "x_stride", "r_factor", "metric"},
                   cfg.variant);
  const NodeSet U = param_set(g, cfg.experiment, "U");
  CorkscrewParams params;
  params.r_min = cfg.experiment.value("r_min", 0.0);
  params.r_max = cfg.experiment.value("r_max", 0.0);
  params.x_stride_cells = cfg.experiment.value("x_stride", 2);
  params.r_factor = cfg.experiment.value("r_factor", params.r_factor);
  params.metric = param_metric(cfg.experiment, Metric::ambient);
  const auto profile =
      staged("corkscrew-profile", [&] { return corkscrew_profile(g, U, params); });
  VariantOutput out;
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("x" + std::to_string(d));
  out.columns.insert(out.columns.end(), {"r", "kappa"});
  for (const auto& e : profile.entries) {
    std::vector<double> row;
    for (double c : g.node_coords(e.x)) row.push_back(c);
    row.insert(row.end(), {e.r, e.kappa});
    out.rows.push_back(std::move(row));
  }
  out.results = json{{"min_kappa", profile.min_kappa},
                     {"worst_x", coords_json(g, profile.worst.x)},
                     {"worst_r", profile.worst.r},
                     {"witness", coords_json(g, profile.worst.witness)}};
  return out;
}

VariantOutput run_john(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"U", "center", "resolution"}, cfg.variant);
  const NodeSet U = param_set(g, cfg.experiment, "U");
  if (!cfg.experiment.contains("center"))
    fail(ErrorKind::config, "missing-key", "john needs 'center'");
  const int32_t center = node_near(g, cfg.experiment["center"]);
  const int resolution = cfg.experiment.value("resolution", 256);
  const auto est =
      staged("john-lower-bound", [&] { return john_lower_bound(g, U, center, resolution); });
  VariantOutput out;
  for (int d = 0; d < g.dim; ++d) out.columns.push_back("x" + std::to_string(d));
  out.columns.insert(out.columns.end(), {"c", "unreachable"});
  for (std::size_t i = 0; i < est.nodes.size(); ++i) {
    std::vector<double> row;
    for (double c : g.node_coords(est.nodes[i])) row.push_back(c);
    row.push_back(est.constants[i]);
    row.push_back(static_cast<double>(est.unreachable[i]));
    out.rows.push_back(std::move(row));
  }
  json path = json::array();
  for (int32_t v : est.argmin_path) path.push_back(coords_json(g, v));
  out.results = json{{"min_constant", est.min_constant},
                     {"argmin", coords_json(g, est.argmin)},
                     {"center", coords_json(g, est.center)},
                     {"argmin_path", path}};
  return out;
}

VariantOutput run_stability_probe(const MetricGraph& g, const ExperimentConfig& cfg) {
  check_param_keys(cfg.experiment, {"family", "members", "rho", "tau", "gamma", "beta"},
                   cfg.variant);
  StabilityProbeParams params;
  const std::string family = cfg.experiment.value("family", "inner-balls");
  if (family == "inner-balls") {
    params.family = ProbeFamily::inner_balls;
  } else if (family == "ordinary-balls") {
    params.family = ProbeFamily::ordinary_balls;
  } else if (family == "beta-neighborhoods") {
    params.family = ProbeFamily::beta_neighborhoods;
  } else if (family == "john-family") {
    params.family = ProbeFamily::john_family;
  } else {
    fail(ErrorKind::config, "invalid-config", "unknown probe family '" + family + "'");
  }
  if (!cfg.experiment.contains("members"))
    fail(ErrorKind::config, "missing-key", "stability-probe needs 'members'");
  for (const auto& m : cfg.experiment["members"]) {
    for (auto it = m.begin(); it != m.end(); ++it) {
      if (it.key() != "center" && it.key() != "R")
        fail(ErrorKind::config, "unknown-key", "unknown key '" + it.key() + "' in member");
    }
    params.members.emplace_back(node_near(g, m.at("center")), m.at("R").get<double>());
  }
  params.rho = cfg.experiment.value("rho", 1.0);
  params.tau = cfg.experiment.value("tau", 2.0);
  params.gamma = cfg.experiment.value("gamma", 1.0);
  params.beta = cfg.experiment.value("beta", 0.25);
  params.solver = cfg.solver;
  const auto probe = staged("stability-probe", [&] { return stability_probe(g, params); });
  VariantOutput out;
  out.columns = {"rho", "R", "ratio", "phi"};
  json rows = json::array();
  for (const auto& r : probe.rows) {
    out.rows.push_back({r.rho, r.R, r.ratio, r.phi});
    json jr{{"rho", r.rho}, {"R", r.R}, {"ratio", r.ratio}, {"phi", r.phi}};
    if (!r.flag.empty()) jr["flag"] = r.flag;
    rows.push_back(jr);
  }
  out.results = json{{"rows", rows}, {"tau", params.tau}, {"gamma", params.gamma}};
  out.warnings = probe.warnings;
  return out;
}

}  // namespace

json Report::to_json(bool include_timing) const {
  json j{{"config", config_echo},
         {"results", results},
         {"diagnostics", diagnostics},
         {"warnings", warnings}};
  if (include_timing) j["timing"] = json{{"wall_seconds", wall_seconds}};
  return j;
}

namespace {

VariantOutput run_variant_at(const ExperimentConfig& cfg, double h, int32_t* nodes) {
  ExperimentConfig level = cfg;
  level.h = h;
  const MetricGraph g =
      staged("build-graph", [&] { return build_graph(level.space, level.box, level.h); });
  *nodes = g.node_count();
  if (cfg.variant == "capacity") return run_capacity(g, level);
  if (cfg.variant == "potential") return run_potential(g, level);
  if (cfg.variant == "superlevel-check") return run_superlevel(g, level);
  if (cfg.variant == "density-scan") return run_density_scan(g, level);
  if (cfg.variant == "sobolev-density") return run_sobolev_density(g, level);
  if (cfg.variant == "dichotomy") return run_dichotomy(g, level);
  if (cfg.variant == "inner-approx") return run_inner_approx(g, level);
  if (cfg.variant == "corkscrew") return run_corkscrew(g, level);
  if (cfg.variant == "john") return run_john(g, level);
  if (cfg.variant == "stability-probe") return run_stability_probe(g, level);
  fail(ErrorKind::config, "invalid-config", "unknown experiment variant '" + cfg.variant + "'");
}

}  // namespace

Report run_config(const ExperimentConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<double> ladder = cfg.h_ladder;
  if (ladder.empty()) ladder.push_back(cfg.h);

  Report report;
  report.config_echo = cfg.echo;
  int32_t nodes = 0;
  if (ladder.size() == 1) {
    VariantOutput out = run_variant_at(cfg, ladder[0], &nodes);
    report.results = out.results;
    report.diagnostics = out.diagnostics.is_null() ? json::object() : out.diagnostics;
    report.warnings = out.warnings;
    report.columns = out.columns;
    report.rows = out.rows;
  } else {
    // refinement ladder: one result block per spacing, an extra leading column
    json levels = json::array();
    report.diagnostics = json::object();
    for (double h : ladder) {
      VariantOutput out = run_variant_at(cfg, h, &nodes);
      levels.push_back(json{{"h", h}, {"results", out.results}});
      if (report.columns.empty()) {
        report.columns.push_back("h");
        report.columns.insert(report.columns.end(), out.columns.begin(), out.columns.end());
      }
      for (auto row : out.rows) {
        row.insert(row.begin(), h);
        report.rows.push_back(std::move(row));
      }
      for (auto& w : out.warnings) report.warnings.push_back(std::move(w));
    }
    report.results = json{{"levels", levels}};
  }
  report.results["variant"] = cfg.variant;
  report.diagnostics["kernel_backend"] = kern::backend_name(kern::active_backend());
  report.diagnostics["threads"] = cfg.threads;
  report.diagnostics["nodes"] = nodes;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace capdens
