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

#ifndef FRIDA_SPECTRAL_HPP_
#define FRIDA_SPECTRAL_HPP_

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sim.hpp"

namespace frida {

// Non-overlapping Hann-windowed STFT frames for all channels. The window is
// scaled so a full-scale sine at a bin center yields unit bin magnitude.
struct SnapshotTensor {
  // frames[n] is (channels x bins), bins = fft_size/2 + 1
  std::vector<Eigen::MatrixXcd> frames;
  int fft_size = 0;
  double sample_rate = 0.0;
  std::vector<double> bin_frequencies;  // rad/s, 2*pi*b*fs/fft_size

  int num_snapshots() const { return static_cast<int>(frames.size()); }
  int num_channels() const { return frames.empty() ? 0 : static_cast<int>(frames[0].rows()); }
  int num_bins() const { return frames.empty() ? 0 : static_cast<int>(frames[0].cols()); }
};

// One band's cross-correlation measurements, ordered-pair order.
struct SubbandMeasurement {
  double omega = 0.0;   // rad/s
  Eigen::VectorXcd a;   // length Q(Q-1)
};

struct VisibilitySet {
  std::vector<SubbandMeasurement> bands;
  // Per-entry variance estimate of the snapshot-averaged measurements,
  // from a split-half bootstrap (0 when too few snapshots to split).
  double bootstrap_variance = 0.0;
};

enum class BandPolicy { kMaxPower, kExplicitList };

// fft_size must be a power of two, signal length at least one frame.
SnapshotTensor stft(const MultichannelSignal& sig, int fft_size);

// Total per-bin power across snapshots and channels (selection metric).
Eigen::VectorXd band_power(const SnapshotTensor& snap);

// kMaxPower: the `count` strongest bins excluding DC and Nyquist, ties to
// the lower bin. kExplicitList: validates and returns `explicit_bins`.
std::vector<int> select_bands(const SnapshotTensor& snap, int count, BandPolicy policy,
                              const std::vector<int>& explicit_bins = {});

// Snapshot-averaged cross-correlations for each requested bin:
// a_(q,q') = mean_n Y_q^(n) * conj(Y_q'^(n)), diagonal excluded.
VisibilitySet estimate_visibilities(const SnapshotTensor& snap,
                                    const std::vector<int>& bins);

std::string visibilities_to_json(const VisibilitySet& vis, const std::vector<int>& bins);

}  // namespace frida

#endif  // FRIDA_SPECTRAL_HPP_
