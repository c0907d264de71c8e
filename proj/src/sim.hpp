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

#ifndef FRIDA_SIM_HPP_
#define FRIDA_SIM_HPP_

#include <cstdint>
#include <vector>

#include "geometry.hpp"

namespace frida {

enum class SignalKind { kWhiteNoise, kFileBacked };

struct SourceScenario {
  std::vector<double> azimuths;  // radians, pairwise distinct mod 2*pi
  SignalKind signal_kind = SignalKind::kWhiteNoise;
  // One waveform per source when file-backed; ignored for white noise.
  std::vector<std::vector<double>> waveforms;
  std::int64_t duration_samples = 65536;
  double sample_rate = 16000.0;
};

struct MultichannelSignal {
  std::vector<std::vector<double>> channels;  // equal lengths
  double sample_rate = 16000.0;

  int num_channels() const { return static_cast<int>(channels.size()); }
  std::int64_t num_samples() const {
    return channels.empty() ? 0 : static_cast<std::int64_t>(channels[0].size());
  }
};

// Length of the windowed-sinc interpolator used for fractional delays.
inline constexpr int kFractionalDelayTaps = 81;

// Interpolator taps for a delay of (center + frac) samples, frac in [0, 1);
// Hann-windowed sinc, normalized to unit energy so white-noise power is
// preserved through the filter.
std::vector<double> fractional_delay_filter(double frac);

// Far-field synthesis: channel q receives sum_k s_k(t - tau_qk) with
// tau_qk = <p_k, r_q>/c plus a common offset keeping all delays causal,
// p_k = (cos az_k, sin az_k). Delays are realized as an integer shift plus
// the windowed-sinc fractional part. Deterministic given the seed.
MultichannelSignal simulate_farfield(const ArrayGeometry& geom,
                                     const SourceScenario& scenario,
                                     std::uint64_t rng_seed);

// Adds white Gaussian noise per channel at the given SNR, referenced to the
// mean per-channel signal power over all channels. +infinity passes the
// signal through untouched.
MultichannelSignal add_noise(const MultichannelSignal& sig, double snr_db,
                             std::uint64_t rng_seed);

}  // namespace frida

#endif  // FRIDA_SIM_HPP_
