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
// Linear operator from uniform Fourier-series samples of the angular
// intensity to microphone-pair cross-correlations, one operator per
// narrow band. Built from the Jacobi-Anger expansion: entry for pair
// (q,q') and order m is 2*pi * (-j)^m * J_m(w*||dr||) * exp(j*m*theta)
// with dr the normalized baseline and theta its angle.

#ifndef FRIDA_FRIMAP_HPP_
#define FRIDA_FRIMAP_HPP_

#include <Eigen/Dense>
#include <string>

#include "geometry.hpp"

namespace frida {

// Symmetric order set {-M, ..., M}.
struct FourierTruncation {
  int max_order = 0;

  int size() const { return 2 * max_order + 1; }
};

struct MappingMatrix {
  double omega = 0.0;        // rad/s
  int max_order = 0;         // columns cover orders -M..M
  Eigen::MatrixXcd entries;  // Q(Q-1) rows in baseline pair order

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }
};

// Picks the order cut-off for a band: enough orders past the turning point
// that the Bessel tail is negligible (the needed slack grows like the cube
// root of the argument), at least K+2, and capped so 2M+1 never exceeds the
// measurement count Q(Q-1). Throws when even the cap cannot reach K.
FourierTruncation choose_truncation(const ArrayGeometry& geom, double omega, int num_sources);
FourierTruncation choose_truncation(double max_baseline_norm_s, int num_pairs,
                                    double omega, int num_sources);

// Builds the mapping for one band. With enforce_rank, verifies the matrix
// has full column rank (smallest singular value > 1e-8 * largest) and
// throws NumericalError("degenerate geometry/truncation ...") otherwise;
// forward-only uses may disable the check.
MappingMatrix build_mapping(const BaselineSet& bl, double omega,
                            const FourierTruncation& trunc, bool enforce_rank = true);

// Debug dump (matrix entries as [re, im] pairs).
std::string mapping_to_json(const MappingMatrix& g);

}  // namespace frida

#endif  // FRIDA_FRIMAP_HPP_
