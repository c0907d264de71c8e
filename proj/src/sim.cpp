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

#include "sim.hpp"

#include <algorithm>
#include <cmath>

#include "rng.hpp"

namespace frida {

namespace {

void validate_scenario(const SourceScenario& sc) {
  if (sc.azimuths.empty()) throw std::invalid_argument("scenario: need at least one source");
  if (!(sc.sample_rate > 0.0)) throw std::invalid_argument("scenario: bad sample rate");
  for (std::size_t i = 0; i < sc.azimuths.size(); ++i) {
    if (!std::isfinite(sc.azimuths[i]))
      throw std::invalid_argument("scenario: non-finite azimuth");
    for (std::size_t j = i + 1; j < sc.azimuths.size(); ++j) {
      const double d = std::fmod(std::abs(sc.azimuths[i] - sc.azimuths[j]), kTwoPi);
      if (std::min(d, kTwoPi - d) < 1e-12)
        throw std::invalid_argument("scenario: duplicate azimuths");
    }
  }
  if (sc.duration_samples < kFractionalDelayTaps)
    throw std::invalid_argument("scenario: duration shorter than the delay filter");
  if (sc.signal_kind == SignalKind::kFileBacked &&
      sc.waveforms.size() != sc.azimuths.size())
    throw std::invalid_argument("scenario: need one waveform per source");
}

}  // namespace

std::vector<double> fractional_delay_filter(double frac) {
  std::vector<double> taps(kFractionalDelayTaps);
  const int center = kFractionalDelayTaps / 2;
  double energy = 0.0;
  for (int i = 0; i < kFractionalDelayTaps; ++i) {
    const double t = i - center - frac;
    const double s = (std::abs(t) < 1e-12) ? 1.0 : std::sin(kPi * t) / (kPi * t);
    // Hann window over the tap span
    const double w = 0.5 * (1.0 + std::cos(kPi * (i - center) / center));
    taps[i] = s * w;
    energy += taps[i] * taps[i];
  }
  const double scale = 1.0 / std::sqrt(energy);
  for (double& t : taps) t *= scale;
  return taps;
}

MultichannelSignal simulate_farfield(const ArrayGeometry& geom,
                                     const SourceScenario& scenario,
                                     std::uint64_t rng_seed) {
  validate_scenario(scenario);
  const int q = geom.num_mics();
  const int k = static_cast<int>(scenario.azimuths.size());
  const double fs = scenario.sample_rate;
  const double c = geom.speed_of_sound();
  const std::int64_t n = scenario.duration_samples;
  const int center = kFractionalDelayTaps / 2;

  // Raw delays in samples; offset so the smallest is zero.
  std::vector<std::vector<double>> delay(k, std::vector<double>(q));
  double min_delay = 0.0;
  for (int s = 0; s < k; ++s) {
    const Eigen::Vector2d p(std::cos(scenario.azimuths[s]), std::sin(scenario.azimuths[s]));
    for (int m = 0; m < q; ++m) {
      delay[s][m] = fs * p.dot(geom.position(m)) / c;
      min_delay = std::min(min_delay, delay[s][m]);
    }
  }
  double max_delay = 0.0;
  for (int s = 0; s < k; ++s)
    for (int m = 0; m < q; ++m) {
      delay[s][m] -= min_delay;
      max_delay = std::max(max_delay, delay[s][m]);
    }

  // Source streams long enough to cover every shift plus filter transients.
  const std::int64_t lead = static_cast<std::int64_t>(std::ceil(max_delay)) + center + 1;
  const std::int64_t src_len = n + lead + center + 1;
  std::vector<std::vector<double>> sources(k);
  for (int s = 0; s < k; ++s) {
    auto& w = sources[s];
    w.assign(src_len, 0.0);
    if (scenario.signal_kind == SignalKind::kWhiteNoise) {
      Rng rng(mix_seed(rng_seed, 0x5157ULL + s));
      for (auto& v : w) v = rng.gaussian();
    } else {
      const auto& file = scenario.waveforms[s];
      for (std::int64_t i = 0; i < src_len && i < static_cast<std::int64_t>(file.size()); ++i)
        w[i] = file[i];
    }
  }

  MultichannelSignal out;
  out.sample_rate = fs;
  out.channels.assign(q, std::vector<double>(n, 0.0));
  for (int s = 0; s < k; ++s) {
    for (int m = 0; m < q; ++m) {
      const double d = delay[s][m];
      const double ipart = std::floor(d);
      const auto taps = fractional_delay_filter(d - ipart);
      const std::int64_t shift = static_cast<std::int64_t>(ipart);
      auto& ch = out.channels[m];
      const auto& src = sources[s];
      // y[t] = sum_i taps[i] * src[t + lead - shift - i + center]
      for (std::int64_t t = 0; t < n; ++t) {
        const std::int64_t base = t + lead - shift + center;
        double acc = 0.0;
        for (int i = 0; i < kFractionalDelayTaps; ++i) acc += taps[i] * src[base - i];
        ch[t] += acc;
      }
    }
  }
  return out;
}

MultichannelSignal add_noise(const MultichannelSignal& sig, double snr_db,
                             std::uint64_t rng_seed) {
  if (sig.channels.empty() || sig.num_samples() == 0)
    throw std::invalid_argument("add_noise: empty signal");
  if (std::isinf(snr_db) && snr_db > 0) return sig;

  double power = 0.0;
  std::int64_t count = 0;
  for (const auto& ch : sig.channels) {
    for (double v : ch) power += v * v;
    count += static_cast<std::int64_t>(ch.size());
  }
  power /= static_cast<double>(count);
  const double sigma = std::sqrt(power * std::pow(10.0, -snr_db / 10.0));

  MultichannelSignal out = sig;
  for (std::size_t q = 0; q < out.channels.size(); ++q) {
    Rng rng(mix_seed(rng_seed, 0xA0D5ULL + q));
    for (double& v : out.channels[q]) v += sigma * rng.gaussian();
  }
  return out;
}

}  // namespace frida
