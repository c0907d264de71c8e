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

#ifndef FRIDA_PIPELINE_HPP_
#define FRIDA_PIPELINE_HPP_

#include <optional>

#include "baselines.hpp"
#include "eval.hpp"
#include "solver.hpp"

namespace frida {

struct FridaEstimatorOptions {
  int bands = 20;
  SolverConfig solver{.beta_ridge = 1e-11};  // damp noise in weak Fourier orders
};

struct GridEstimatorOptions {
  int bands = 20;
  int grid_resolution = 3600;
};

struct FridaRunDetail {
  std::vector<int> bands_used;
  std::vector<int> bands_skipped;  // rejected by rank/adequacy admission
  DoaEstimate estimate;
};

// Band-admission rule shared by the pipeline: a candidate bin is usable when
// its mapping passes the full-rank check and the rank cap leaves enough
// truncation slack past the turning point. Bins are tried in descending
// power order until `count` pass.
std::vector<int> admit_bands(const SnapshotTensor& snap, const ArrayGeometry& geom,
                             int count, int num_sources,
                             std::vector<int>* skipped = nullptr);

std::vector<double> run_frida(const SnapshotTensor& snap, const ArrayGeometry& geom,
                              int num_sources, const FridaEstimatorOptions& opts,
                              std::uint64_t seed, FridaRunDetail* detail = nullptr);

std::vector<double> run_music(const SnapshotTensor& snap, const ArrayGeometry& geom,
                              int num_sources, const GridEstimatorOptions& opts);

std::vector<double> run_srp_phat(const SnapshotTensor& snap, const ArrayGeometry& geom,
                                 int num_sources, const GridEstimatorOptions& opts);

// Harness adapters.
Estimator make_frida_estimator(const FridaEstimatorOptions& opts);
Estimator make_music_estimator(const GridEstimatorOptions& opts);
Estimator make_srp_phat_estimator(const GridEstimatorOptions& opts);

// Shared cache for per-(geometry, omega, M) mapping matrices.
namespace mapping_cache {
void clear();
std::size_t size();
}  // namespace mapping_cache

}  // namespace frida

#endif  // FRIDA_PIPELINE_HPP_
