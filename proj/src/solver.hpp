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
// Joint multi-band source recovery. All bands share one annihilating
// filter h (source directions are common); each band keeps its own
// Fourier-sample vector b_i. The solve alternates between the filter
// (smallest eigenvector of a weighted annihilation form) and the samples
// (equality-constrained least squares), and stops as soon as the samples
// explain the measurements to the requested level.

#ifndef FRIDA_SOLVER_HPP_
#define FRIDA_SOLVER_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "annihilation.hpp"
#include "frimap.hpp"
#include "spectral.hpp"

namespace frida {

struct SolverConfig {
  int max_init = 15;         // random restarts
  int max_iter = 50;         // inner iterations per restart
  double epsilon_sq = -1.0;  // target residual; < 0 means auto (1e-12 * sum ||a||^2)
  double ridge = 1e-12;      // trace-normalized, inside the bracketed inverse
  // Trace-normalized Tikhonov weight for the per-band projections
  // (G^H G + w I)^{-1}; keeps noisy measurements from exploding into the
  // weakly observed high orders. Zero reproduces the plain inverse.
  double beta_ridge = 0.0;
};

struct DoaEstimate {
  std::vector<double> azimuths;  // K angles in [0, 2pi), ascending
  Eigen::MatrixXd powers;        // K x J per-band powers, >= 0
  double residual = 0.0;         // sum_i ||a_i - G_i b_i||^2 at the kept solution
  double epsilon_sq_used = 0.0;
  int iterations_used = 0;
  int restarts_used = 0;
  bool degenerate = false;  // zero measurements or reduced filter degree
  bool power_condition_warning = false;
  std::vector<double> restart_best_residuals;  // best-so-far per restart
};

struct RootExtraction {
  std::vector<double> azimuths;
  bool reduced_degree = false;
};

// Roots of the polynomial h_0 z^K + ... + h_K, returned as angles
// (-arg z) mod 2pi. Coefficients below 1e-12*||h|| at either end reduce the
// degree (flagged) and the remaining roots are returned best-effort.
RootExtraction extract_azimuths(const Eigen::VectorXcd& h);

// Per-band nonnegative power fit: a_i ~ A_i sigma^2 with column k of A_i the
// steering cross-correlation exp(-j w_i <p_k, dr>). Returns K x J.
Eigen::MatrixXd estimate_powers(const std::vector<double>& azimuths,
                                const std::vector<SubbandMeasurement>& measurements,
                                const BaselineSet& bl,
                                bool* condition_warning = nullptr);

DoaEstimate solve(const std::vector<SubbandMeasurement>& measurements,
                  const std::vector<MappingMatrix>& mappings,
                  const BaselineSet& bl, int num_sources, const SolverConfig& cfg,
                  std::uint64_t rng_seed);

std::string estimate_to_json(const DoaEstimate& est);

}  // namespace frida

#endif  // FRIDA_SOLVER_HPP_
