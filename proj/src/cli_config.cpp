#include <fstream>
#include <set>

#include "capdens/cli.hpp"
#include "capdens/errors.hpp"
#include "capdens/sets.hpp"

namespace capdens {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.count(it.key()) == 0)
      fail(ErrorKind::config, "unknown-key",
           std::string("unknown key '") + it.key() + "' in " + where);
  }
}

double need_number(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_number())
    fail(ErrorKind::config, "missing-key", std::string(where) + " needs numeric '" + key + "'");
  return obj[key].get<double>();
}

std::vector<double> need_point(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_array())
    fail(ErrorKind::config, "missing-key", std::string(where) + " needs point '" + key + "'");
  std::vector<double> p;
  for (const auto& v : obj[key]) p.push_back(v.get<double>());
  return p;
}

std::vector<std::array<double, 2>> parse_bounds(const json& j, const char* where) {
  if (!j.is_array() || j.empty())
    fail(ErrorKind::config, "invalid-box", std::string(where) + ": bounds must be a list");
  std::vector<std::array<double, 2>> b;
  for (const auto& axis : j) {
    if (!axis.is_array() || axis.size() != 2)
      fail(ErrorKind::config, "invalid-box",
           std::string(where) + ": each axis needs [lo, hi]");
    b.push_back({axis[0].get<double>(), axis[1].get<double>()});
  }
  return b;
}

SpaceSpec parse_space(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(ErrorKind::config, "invalid-space", "space needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  SpaceSpec s;
  if (type == "euclidean-box") {
    check_keys(j, {"type", "bounds"}, "space");
    EuclideanBox b;
    b.bounds = parse_bounds(j.at("bounds"), "space.bounds");
    for (const auto& ax : b.bounds) {
      if (!(ax[1] > ax[0]) || !std::isfinite(ax[0]) || !std::isfinite(ax[1]))
        fail(ErrorKind::config, "invalid-space", "box bounds must be finite with positive extent");
    }
    s.shape = b;
  } else if (type == "slit-space") {
    check_keys(j, {"type", "dimension", "slit_count"}, "space");
    SlitSpace sl;
    sl.dimension = j.value("dimension", 2);
    sl.slit_count = j.value("slit_count", 4);
    if (sl.dimension < 2 || sl.dimension > 3)
      fail(ErrorKind::config, "invalid-space", "slit-space dimension must be 2 or 3");
    if (sl.slit_count < 1)
      fail(ErrorKind::config, "invalid-space", "slit_count must be at least 1");
    s.shape = sl;
  } else if (type == "cosine-strip") {
    check_keys(j, {"type", "x_min", "x_max"}, "space");
    CosineStrip c;
    c.x_min = need_number(j, "x_min", "space");
    c.x_max = need_number(j, "x_max", "space");
    if (!(c.x_max > c.x_min))
      fail(ErrorKind::config, "invalid-space", "cosine strip needs x_max > x_min");
    s.shape = c;
  } else {
    fail(ErrorKind::config, "invalid-space", "unknown space type '" + type + "'");
  }
  return s;
}

SolverConfig parse_solver(const json& j) {
  SolverConfig cfg;
  if (j.is_null()) return cfg;
  check_keys(j, {"p", "tol", "max_iter", "eps0", "eps_floor"}, "solver");
  cfg.p = j.value("p", cfg.p);
  cfg.tol = j.value("tol", cfg.tol);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  cfg.eps0 = j.value("eps0", cfg.eps0);
  cfg.eps_floor = j.value("eps_floor", cfg.eps_floor);
  cfg.validate();
  return cfg;
}

json solver_echo(const SolverConfig& cfg) {
  return json{{"p", cfg.p},
              {"tol", cfg.tol},
              {"max_iter", cfg.max_iter},
              {"eps0", cfg.eps0},
              {"eps_floor", cfg.eps_floor}};
}

}  // namespace

SetSpec set_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type"))
    fail(ErrorKind::config, "invalid-set", "set needs a 'type'");
  const std::string type = j["type"].get<std::string>();
  if (type == "ball") {
    check_keys(j, {"type", "center", "radius"}, "set");
    return SetSpec::make_ball(need_point(j, "center", "ball"), need_number(j, "radius", "ball"));
  }
  if (type == "lower-half-ball") {
    check_keys(j, {"type", "center", "radius"}, "set");
    return SetSpec::make_lower_half_ball(need_point(j, "center", "lower-half-ball"),
                                         need_number(j, "radius", "lower-half-ball"));
  }
  if (type == "lattice-balls") {
    check_keys(j, {"type", "spacing", "radius", "exclude_slit_neighborhood"}, "set");
    return SetSpec::make_lattice_balls(need_number(j, "spacing", "lattice-balls"),
                                       need_number(j, "radius", "lattice-balls"),
                                       j.value("exclude_slit_neighborhood", false));
  }
  if (type == "box") {
    check_keys(j, {"type", "bounds"}, "set");
    return SetSpec::make_box(parse_bounds(j.at("bounds"), "set.bounds"));
  }
  if (type == "union" || type == "intersection") {
    check_keys(j, {"type", "members"}, "set");
    if (!j.contains("members") || !j["members"].is_array())
      fail(ErrorKind::config, "invalid-set", type + " needs 'members'");
    std::vector<SetSpec> members;
    for (const auto& m : j["members"]) members.push_back(set_from_json(m));
    return type == "union" ? SetSpec::make_union(std::move(members))
                           : SetSpec::make_intersection(std::move(members));
  }
  if (type == "complement") {
    check_keys(j, {"type", "member"}, "set");
    if (!j.contains("member"))
      fail(ErrorKind::config, "invalid-set", "complement needs 'member'");
    return SetSpec::make_complement(set_from_json(j["member"]));
  }
  fail(ErrorKind::config, "invalid-set", "unknown set type '" + type + "'");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorKind::config, "invalid-config", "config must be a JSON object");
  check_keys(j,
             {"version", "space", "box", "h", "h_ladder", "solver", "seed", "threads", "output",
              "experiment"},
             "config");
  ExperimentConfig cfg;
  if (!j.contains("version") || !j["version"].is_number_integer())
    fail(ErrorKind::config, "missing-key", "config needs an integer 'version'");
  cfg.version = j["version"].get<int>();
  if (cfg.version != 1)
    fail(ErrorKind::config, "invalid-config",
         "unrecognized config version " + std::to_string(cfg.version));

  if (!j.contains("space")) fail(ErrorKind::config, "missing-key", "config needs 'space'");
  cfg.space = parse_space(j["space"]);
  if (!j.contains("box")) fail(ErrorKind::config, "missing-key", "config needs 'box'");
  cfg.box.bounds = parse_bounds(j["box"], "box");
  cfg.h = need_number(j, "h", "config");
  if (j.contains("h_ladder")) {
    for (const auto& v : j["h_ladder"]) cfg.h_ladder.push_back(v.get<double>());
    for (std::size_t i = 0; i < cfg.h_ladder.size(); ++i) {
      if (!(cfg.h_ladder[i] > 0.0) || (i > 0 && !(cfg.h_ladder[i] < cfg.h_ladder[i - 1])))
        fail(ErrorKind::config, "invalid-config",
             "h_ladder must be positive and strictly decreasing");
    }
  }
  cfg.solver = parse_solver(j.value("solver", json()));
  cfg.seed = j.value("seed", 0);
  cfg.threads = j.value("threads", 1);
  if (cfg.threads < 1) fail(ErrorKind::config, "invalid-config", "threads must be >= 1");

  if (j.contains("output")) {
    check_keys(j["output"], {"dir", "format", "prefix"}, "output");
    cfg.output.dir = j["output"].value("dir", cfg.output.dir);
    cfg.output.format = j["output"].value("format", cfg.output.format);
    cfg.output.prefix = j["output"].value("prefix", cfg.output.prefix);
  }
  if (cfg.output.format != "json" && cfg.output.format != "csv" && cfg.output.format != "both")
    fail(ErrorKind::config, "invalid-config", "output format must be json, csv or both");

  if (!j.contains("experiment") || !j["experiment"].is_object() ||
      !j["experiment"].contains("variant"))
    fail(ErrorKind::config, "missing-key", "config needs 'experiment' with a 'variant'");
  cfg.experiment = j["experiment"];
  cfg.variant = cfg.experiment["variant"].get<std::string>();

  // resolved echo: original keys plus filled defaults
  cfg.echo = j;
  cfg.echo["solver"] = solver_echo(cfg.solver);
  cfg.echo["seed"] = cfg.seed;
  cfg.echo["threads"] = cfg.threads;
  cfg.echo["output"] =
      json{{"dir", cfg.output.dir}, {"format", cfg.output.format}, {"prefix", cfg.output.prefix}};
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "config-unreadable", "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(ErrorKind::config, "invalid-config", std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace capdens
