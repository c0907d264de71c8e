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
//
// Experiment configuration: strict schema (unknown keys rejected), every
// default made explicit in the effective dump so a dumped config re-runs
// bit-identically.

#ifndef FRIDA_CONFIG_HPP_
#define FRIDA_CONFIG_HPP_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "eval.hpp"
#include "pipeline.hpp"

namespace frida {

struct GeometrySpec {
  // builtin triangular
  bool builtin_triangular = true;
  double edge_m = 0.30;
  int mics_per_edge = 8;
  // or a file
  std::string file;
  // or inline positions
  std::vector<std::array<double, 2>> positions;

  double speed_of_sound = kDefaultSpeedOfSound;
  std::vector<int> subset;  // optional mic subset, applied last

  ArrayGeometry build() const;
};

struct ScenarioSpec {
  int num_sources = 1;
  std::optional<std::vector<double>> azimuths_deg;  // absent = random each trial
  int num_snapshots = 256;
  double sample_rate = 16000.0;
  std::optional<double> snr_db;  // absent = noiseless
};

struct EstimatorSpec {
  std::string name;  // "frida" | "music" | "srp-phat"
  FridaEstimatorOptions frida;
  GridEstimatorOptions grid;

  Estimator make() const;
};

struct SweepSpec {
  std::string type;  // "snr" | "separation"
  std::vector<double> snr_db;  // snr sweep values
  int trials = 50;
  std::vector<double> delta_deg;  // separation sweep values
  int phi_count = 20;
  int trials_per_phi = 5;
  double fixed_snr_db = 0.0;  // separation sweep noise level
  double success_threshold_deg = 5.0;
};

struct OutputSpec {
  std::string dir = ".";
  std::string prefix = "run";
  bool dump_visibilities = false;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  int workers = 0;
  int fft_size = 256;
  GeometrySpec geometry;
  ScenarioSpec scenario;
  std::vector<EstimatorSpec> estimators;
  std::optional<SweepSpec> sweep;
  OutputSpec output;

  std::string effective_json() const;  // fully resolved, ordered
};

// Throws std::invalid_argument with a descriptive message on schema errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config_file(const std::string& path);

}  // namespace frida

#endif  // FRIDA_CONFIG_HPP_
