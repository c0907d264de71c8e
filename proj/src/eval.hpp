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
// Error metrics, truth/estimate matching and the seeded Monte Carlo sweep
// harness. Trials are independent jobs writing into index-addressed slots;
// aggregation folds in trial order, so results do not depend on the worker
// count.

#ifndef FRIDA_EVAL_HPP_
#define FRIDA_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "geometry.hpp"
#include "spectral.hpp"

namespace frida {

// Wrapped signed difference phi - phi_hat in (-pi, pi]; the magnitude is the
// geodesic distance on the circle.
double circular_distance(double phi, double phi_hat);

struct MatchReport {
  std::vector<double> errors;    // signed, per truth index, under the matching
  std::vector<int> permutation;  // estimate index assigned to each truth index
  double total_abs_error = 0.0;
  std::vector<bool> success;     // |error| < success_threshold (strict)
};

// Assignment minimizing the sum of absolute circular errors; exhaustive for
// K <= 2, Hungarian beyond.
MatchReport match_and_score(const std::vector<double>& truth,
                            const std::vector<double>& estimate,
                            double success_threshold = std::numeric_limits<double>::infinity());

// Mean direction arg(sum e^{j theta}) mapped to [0, 2pi), and the mean
// absolute circular distance of the samples to it.
std::pair<double, double> circular_mean_spread(const std::vector<double>& samples);

// One DOA estimator as seen by the harness.
struct Estimator {
  std::string name;
  std::function<std::vector<double>(const SnapshotTensor&, const ArrayGeometry&,
                                    int num_sources, std::uint64_t seed)>
      run;
};

struct SweepAggregate {
  std::string estimator;
  double sweep_value = 0.0;    // dB or degrees, per sweep type
  double mean_error_deg = 0.0;
  double median_error_deg = 0.0;
  double success_rate = 0.0;   // trials with every source recovered
  double recovered_mean = 0.0; // average number of recovered sources
  int trials = 0;
};

struct SweepResult {
  std::string sweep_type;  // "snr" | "separation"
  std::vector<double> sweep_values;
  std::vector<std::string> estimator_names;
  std::uint64_t master_seed = 0;
  int trials_per_value = 0;
  double success_threshold_deg = 0.0;  // snr sweep recovery rule

  struct Trial {
    std::uint64_t seed = 0;
    std::vector<double> truth_rad;
    std::vector<std::vector<double>> estimates_rad;  // [estimator][source]
    std::vector<std::vector<double>> errors_rad;     // matched signed errors
  };
  std::vector<std::vector<Trial>> trials;  // [value][trial]
  std::vector<SweepAggregate> aggregates;  // estimator-major, then value
};

struct SweepProtocol {
  int num_snapshots = 256;
  int fft_size = 256;
  double sample_rate = 16000.0;
  int workers = 0;  // 0 = hardware concurrency
  double success_threshold_deg = 5.0;
};

// Fixed-source-count sweep over noise levels: each trial draws fresh random
// azimuths (min separation 1 degree), simulates, adds noise and scores every
// estimator. Deterministic given the seed.
SweepResult snr_sweep(const std::vector<Estimator>& estimators,
                      const std::vector<double>& snr_db_list, int trials,
                      int num_sources, const ArrayGeometry& geom,
                      const SweepProtocol& proto, std::uint64_t seed);

// Two sources at phi and phi+delta; phi sweeps a uniform grid with several
// noise realizations each. A source counts as recovered when its matched
// error is strictly below delta/2.
SweepResult separation_sweep(const std::vector<Estimator>& estimators,
                             const std::vector<double>& delta_deg_list,
                             int trials_per_phi, int phi_count, double snr_db,
                             const ArrayGeometry& geom, const SweepProtocol& proto,
                             std::uint64_t seed);

// v1 schemas. CSV: one row per estimator x sweep value; JSON: full detail.
std::string sweep_to_csv(const SweepResult& result);
std::string sweep_to_json(const SweepResult& result);

}  // namespace frida

#endif  // FRIDA_EVAL_HPP_
