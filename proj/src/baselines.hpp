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
// Grid-search reference estimators for comparison runs.

#ifndef FRIDA_BASELINES_HPP_
#define FRIDA_BASELINES_HPP_

#include <vector>

#include "geometry.hpp"
#include "spectral.hpp"

namespace frida {

struct AngularGrid {
  int resolution = 3600;  // 0.1 degree steps

  double angle(int i) const { return kTwoPi * i / resolution; }
};

struct GridSearchResult {
  std::vector<double> azimuths;  // K angles, ascending
  bool low_confidence = false;   // peak-to-mean ratio below 1.5
  std::vector<double> spectrum;  // fused response over the grid
};

// Incoherent wideband MUSIC: per band, eigendecompose the sample spatial
// covariance, project steering vectors on the noise subspace, max-normalize
// the pseudospectrum and average over bands. Requires K < Q.
GridSearchResult music_incoherent(const SnapshotTensor& snap, const ArrayGeometry& geom,
                                  const std::vector<int>& bands, int num_sources,
                                  const AngularGrid& grid);

// SRP-PHAT over the same grid: per band, sum of phase-normalized
// cross-spectra steered to each angle, summed over bands.
GridSearchResult srp_phat(const SnapshotTensor& snap, const ArrayGeometry& geom,
                          const std::vector<int>& bands, int num_sources,
                          const AngularGrid& grid);

// K largest circular local maxima at least two grid steps apart; ties go to
// the larger value, then the smaller angle. Exposed for tests.
std::vector<int> pick_peaks(const std::vector<double>& spectrum, int count);

}  // namespace frida

#endif  // FRIDA_BASELINES_HPP_
