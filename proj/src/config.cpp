// Copyright 2026 The frida-doa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace frida {

namespace {

using Json = nlohmann::json;

[[noreturn]] void bad(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

void check_keys(const Json& j, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!j.is_object()) bad(where + " must be an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.count(key)) bad("unknown key \"" + key + "\" in " + where);
}

GeometrySpec parse_geometry(const Json& j) {
  GeometrySpec g;
  if (j.is_null()) return g;
  check_keys(j, "geometry",
             {"builtin", "edge_m", "mics_per_edge", "file", "positions",
              "speed_of_sound", "subset"});
  const bool has_builtin = j.contains("builtin");
  const bool has_file = j.contains("file");
  const bool has_positions = j.contains("positions");
  if (has_builtin + has_file + has_positions > 1)
    bad("geometry: give exactly one of builtin/file/positions");
  if (has_file) {
    g.builtin_triangular = false;
    g.file = j["file"].get<std::string>();
  } else if (has_positions) {
    g.builtin_triangular = false;
    for (const auto& p : j["positions"]) {
      if (!p.is_array() || p.size() != 2) bad("geometry.positions entries must be [x, y]");
      g.positions.push_back({p[0].get<double>(), p[1].get<double>()});
    }
  } else if (has_builtin && j["builtin"].get<std::string>() != "triangular") {
    bad("geometry.builtin: only \"triangular\" is available");
  }
  g.edge_m = j.value("edge_m", g.edge_m);
  g.mics_per_edge = j.value("mics_per_edge", g.mics_per_edge);
  g.speed_of_sound = j.value("speed_of_sound", g.speed_of_sound);
  if (j.contains("subset")) {
    for (const auto& v : j["subset"]) g.subset.push_back(v.get<int>());
  }
  return g;
}

ScenarioSpec parse_scenario(const Json& j) {
  ScenarioSpec s;
  if (j.is_null()) return s;
  check_keys(j, "scenario",
             {"num_sources", "azimuths_deg", "num_snapshots", "sample_rate", "snr_db"});
  s.num_sources = j.value("num_sources", s.num_sources);
  if (s.num_sources < 1) bad("scenario.num_sources must be >= 1");
  if (j.contains("azimuths_deg") && !j["azimuths_deg"].is_null()) {
    std::vector<double> az;
    for (const auto& v : j["azimuths_deg"]) az.push_back(v.get<double>());
    if (static_cast<int>(az.size()) != s.num_sources)
      bad("scenario.azimuths_deg length must equal num_sources");
    s.azimuths_deg = std::move(az);
  }
  s.num_snapshots = j.value("num_snapshots", s.num_snapshots);
  if (s.num_snapshots < 2) bad("scenario.num_snapshots must be >= 2");
  s.sample_rate = j.value("sample_rate", s.sample_rate);
  if (!(s.sample_rate > 0)) bad("scenario.sample_rate must be positive");
  if (j.contains("snr_db") && !j["snr_db"].is_null())
    s.snr_db = j["snr_db"].get<double>();
  return s;
}

SolverConfig parse_solver(const Json& j) {
  SolverConfig cfg;
  cfg.beta_ridge = 1e-11;  // pipeline default
  if (j.is_null()) return cfg;
  check_keys(j, "solver", {"max_init", "max_iter", "epsilon_sq", "ridge", "beta_ridge"});
  cfg.max_init = j.value("max_init", cfg.max_init);
  cfg.max_iter = j.value("max_iter", cfg.max_iter);
  if (cfg.max_init < 1 || cfg.max_iter < 1) bad("solver iterations must be >= 1");
  if (j.contains("epsilon_sq")) {
    if (j["epsilon_sq"].is_string()) {
      if (j["epsilon_sq"].get<std::string>() != "auto")
        bad("solver.epsilon_sq must be a number or \"auto\"");
      cfg.epsilon_sq = -1.0;
    } else {
      cfg.epsilon_sq = j["epsilon_sq"].get<double>();
      if (cfg.epsilon_sq < 0) bad("solver.epsilon_sq must be >= 0");
    }
  }
  cfg.ridge = j.value("ridge", cfg.ridge);
  cfg.beta_ridge = j.value("beta_ridge", cfg.beta_ridge);
  if (cfg.ridge < 0 || cfg.beta_ridge < 0) bad("solver ridge terms must be >= 0");
  return cfg;
}

std::vector<EstimatorSpec> parse_estimators(const Json& j) {
  std::vector<EstimatorSpec> out;
  if (j.is_null()) {
    EstimatorSpec e;
    e.name = "frida";
    e.frida.solver = parse_solver(Json());
    out.push_back(e);
    return out;
  }
  if (!j.is_array()) bad("estimators must be an array");
  for (const auto& je : j) {
    EstimatorSpec e;
    if (!je.contains("name")) bad("estimator entry missing \"name\"");
    e.name = je["name"].get<std::string>();
    if (e.name == "frida") {
      check_keys(je, "estimator", {"name", "bands", "solver"});
      e.frida.bands = je.value("bands", e.frida.bands);
      e.frida.solver = parse_solver(je.contains("solver") ? je["solver"] : Json());
      if (e.frida.bands < 1) bad("estimator.bands must be >= 1");
    } else if (e.name == "music" || e.name == "srp-phat") {
      check_keys(je, "estimator", {"name", "bands", "grid_resolution"});
      e.grid.bands = je.value("bands", e.grid.bands);
      e.grid.grid_resolution = je.value("grid_resolution", e.grid.grid_resolution);
      if (e.grid.bands < 1) bad("estimator.bands must be >= 1");
      if (e.grid.grid_resolution < 4) bad("estimator.grid_resolution too small");
    } else {
      bad("unknown estimator \"" + e.name + "\" (expected frida, music or srp-phat)");
    }
    out.push_back(std::move(e));
  }
  return out;
}

SweepSpec parse_sweep(const Json& j) {
  SweepSpec s;
  check_keys(j, "sweep",
             {"type", "snr_db", "trials", "delta_deg", "phi_count", "trials_per_phi",
              "success_threshold_deg"});
  if (!j.contains("type")) bad("sweep.type required");
  s.type = j["type"].get<std::string>();
  s.success_threshold_deg = j.value("success_threshold_deg", s.success_threshold_deg);
  if (s.type == "snr") {
    if (!j.contains("snr_db")) bad("snr sweep needs snr_db list");
    for (const auto& v : j["snr_db"]) s.snr_db.push_back(v.get<double>());
    s.trials = j.value("trials", s.trials);
    if (s.trials < 1) bad("sweep.trials must be >= 1");
  } else if (s.type == "separation") {
    if (!j.contains("delta_deg")) bad("separation sweep needs delta_deg list");
    for (const auto& v : j["delta_deg"]) s.delta_deg.push_back(v.get<double>());
    s.phi_count = j.value("phi_count", s.phi_count);
    s.trials_per_phi = j.value("trials_per_phi", s.trials_per_phi);
    if (s.phi_count < 1 || s.trials_per_phi < 1)
      bad("sweep.phi_count and trials_per_phi must be >= 1");
    if (j.contains("snr_db")) {
      if (!j["snr_db"].is_number()) bad("separation sweep snr_db must be one number");
      s.fixed_snr_db = j["snr_db"].get<double>();
    }
  } else {
    bad("sweep.type must be \"snr\" or \"separation\"");
  }
  return s;
}

OutputSpec parse_output(const Json& j) {
  OutputSpec o;
  if (j.is_null()) return o;
  check_keys(j, "output", {"dir", "prefix", "dump_visibilities"});
  o.dir = j.value("dir", o.dir);
  o.prefix = j.value("prefix", o.prefix);
  o.dump_visibilities = j.value("dump_visibilities", o.dump_visibilities);
  return o;
}

}  // namespace

ArrayGeometry GeometrySpec::build() const {
  ArrayGeometry geom = [&] {
    if (!file.empty()) return load_geometry_file(file);
    if (!positions.empty()) {
      std::vector<Eigen::Vector2d> pos;
      for (const auto& p : positions) pos.emplace_back(p[0], p[1]);
      return ArrayGeometry(std::move(pos), speed_of_sound);
    }
    return build_triangular_array(edge_m, mics_per_edge, speed_of_sound);
  }();
  if (!subset.empty()) geom = geom.subset(subset);
  return geom;
}

Estimator EstimatorSpec::make() const {
  if (name == "frida") return make_frida_estimator(frida);
  if (name == "music") return make_music_estimator(grid);
  if (name == "srp-phat") return make_srp_phat_estimator(grid);
  throw std::invalid_argument("unknown estimator: " + name);
}

ExperimentConfig parse_config(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    bad(std::string("JSON parse error: ") + e.what());
  }
  check_keys(j, "config",
             {"schema_version", "seed", "workers", "fft_size", "geometry", "scenario",
              "estimators", "sweep", "output"});
  if (j.contains("schema_version") && j["schema_version"].get<int>() != 1)
    bad("unsupported schema_version");

  ExperimentConfig cfg;
  cfg.seed = j.value("seed", 0ULL);
  cfg.workers = j.value("workers", 0);
  if (cfg.workers < 0) bad("workers must be >= 0");
  cfg.fft_size = j.value("fft_size", 256);
  if (cfg.fft_size < 4 || (cfg.fft_size & (cfg.fft_size - 1)))
    bad("fft_size must be a power of two >= 4");
  cfg.geometry = parse_geometry(j.contains("geometry") ? j["geometry"] : Json());
  cfg.scenario = parse_scenario(j.contains("scenario") ? j["scenario"] : Json());
  cfg.estimators = parse_estimators(j.contains("estimators") ? j["estimators"] : Json());
  if (cfg.estimators.empty()) bad("estimators list is empty");
  if (j.contains("sweep") && !j["sweep"].is_null()) cfg.sweep = parse_sweep(j["sweep"]);
  cfg.output = parse_output(j.contains("output") ? j["output"] : Json());
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string ExperimentConfig::effective_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["seed"] = seed;
  j["workers"] = workers;
  j["fft_size"] = fft_size;

  nlohmann::ordered_json jg;
  if (!geometry.file.empty()) {
    jg["file"] = geometry.file;
  } else if (!geometry.positions.empty()) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : geometry.positions) arr.push_back({p[0], p[1]});
    jg["positions"] = std::move(arr);
  } else {
    jg["builtin"] = "triangular";
    jg["edge_m"] = geometry.edge_m;
    jg["mics_per_edge"] = geometry.mics_per_edge;
  }
  jg["speed_of_sound"] = geometry.speed_of_sound;
  if (!geometry.subset.empty()) jg["subset"] = geometry.subset;
  j["geometry"] = std::move(jg);

  nlohmann::ordered_json js;
  js["num_sources"] = scenario.num_sources;
  js["azimuths_deg"] =
      scenario.azimuths_deg ? nlohmann::ordered_json(*scenario.azimuths_deg)
                            : nlohmann::ordered_json(nullptr);
  js["num_snapshots"] = scenario.num_snapshots;
  js["sample_rate"] = scenario.sample_rate;
  js["snr_db"] = scenario.snr_db ? nlohmann::ordered_json(*scenario.snr_db)
                                 : nlohmann::ordered_json(nullptr);
  j["scenario"] = std::move(js);

  auto je = nlohmann::ordered_json::array();
  for (const auto& e : estimators) {
    nlohmann::ordered_json x;
    x["name"] = e.name;
    if (e.name == "frida") {
      x["bands"] = e.frida.bands;
      nlohmann::ordered_json sv;
      sv["max_init"] = e.frida.solver.max_init;
      sv["max_iter"] = e.frida.solver.max_iter;
      if (e.frida.solver.epsilon_sq < 0)
        sv["epsilon_sq"] = "auto";
      else
        sv["epsilon_sq"] = e.frida.solver.epsilon_sq;
      sv["ridge"] = e.frida.solver.ridge;
      sv["beta_ridge"] = e.frida.solver.beta_ridge;
      x["solver"] = std::move(sv);
    } else {
      x["bands"] = e.grid.bands;
      x["grid_resolution"] = e.grid.grid_resolution;
    }
    je.push_back(std::move(x));
  }
  j["estimators"] = std::move(je);

  if (sweep) {
    nlohmann::ordered_json jw;
    jw["type"] = sweep->type;
    if (sweep->type == "snr") {
      jw["snr_db"] = sweep->snr_db;
      jw["trials"] = sweep->trials;
    } else {
      jw["delta_deg"] = sweep->delta_deg;
      jw["phi_count"] = sweep->phi_count;
      jw["trials_per_phi"] = sweep->trials_per_phi;
      jw["snr_db"] = sweep->fixed_snr_db;
    }
    jw["success_threshold_deg"] = sweep->success_threshold_deg;
    j["sweep"] = std::move(jw);
  } else {
    j["sweep"] = nullptr;
  }

  nlohmann::ordered_json jo;
  jo["dir"] = output.dir;
  jo["prefix"] = output.prefix;
  jo["dump_visibilities"] = output.dump_visibilities;
  j["output"] = std::move(jo);
  return j.dump(2);
}

}  // namespace frida
