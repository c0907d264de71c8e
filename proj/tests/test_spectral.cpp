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

#include <doctest.h>

#include <cmath>
#include <set>

#include "sim.hpp"
#include "spectral.hpp"
#include "testutil.hpp"

using namespace frida;

namespace {

MultichannelSignal tone_signal(double bin, int fft_size, int frames, double fs) {
  MultichannelSignal sig;
  sig.sample_rate = fs;
  sig.channels.assign(1, std::vector<double>(static_cast<std::size_t>(fft_size) * frames));
  for (std::size_t n = 0; n < sig.channels[0].size(); ++n)
    sig.channels[0][n] = std::sin(kTwoPi * bin * n / fft_size);
  return sig;
}

}  // namespace

TEST_CASE("stft: frame count, bin frequencies, zero signal") {
  MultichannelSignal zeros;
  zeros.sample_rate = 16000.0;
  zeros.channels.assign(3, std::vector<double>(256 * 256, 0.0));
  const auto snap = stft(zeros, 256);
  CHECK(snap.num_snapshots() == 256);
  CHECK(snap.num_channels() == 3);
  CHECK(snap.num_bins() == 129);
  for (int b = 0; b <= 128; ++b)
    CHECK(snap.bin_frequencies[b] == doctest::Approx(kTwoPi * b * 16000.0 / 256.0));
  for (const auto& f : snap.frames) CHECK(f.norm() == 0.0);

  MultichannelSignal shorty;
  shorty.channels.assign(1, std::vector<double>(100, 0.0));
  CHECK_THROWS_AS((void)stft(shorty, 256), std::invalid_argument);
  CHECK_THROWS_AS((void)stft(zeros, 255), std::invalid_argument);
}

TEST_CASE("stft: bin-centred tone concentrates as the direct DFT predicts") {
  const int fft_size = 256;
  const int bin = 37;
  const auto sig = tone_signal(bin, fft_size, 4, 16000.0);
  const auto snap = stft(sig, fft_size);

  // oracle: direct windowed DFT of one frame
  std::vector<double> window(fft_size);
  double wsum = 0.0;
  for (int n = 0; n < fft_size; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(kTwoPi * n / fft_size));
    wsum += window[n];
  }
  std::vector<cplx> oracle(fft_size / 2 + 1);
  double total = 0.0;
  for (int b = 0; b <= fft_size / 2; ++b) {
    cplx acc(0, 0);
    for (int n = 0; n < fft_size; ++n)
      acc += sig.channels[0][n] * window[n] * (2.0 / wsum) *
             std::polar(1.0, -kTwoPi * b * n / fft_size);
    oracle[b] = acc;
    total += std::norm(acc);
  }
  const double oracle_fraction = std::norm(oracle[bin]) / total;
  // Hann leakage splits a bin-centred tone 1/4 : 1/16 : 1/16 across three
  // bins; exactly 2/3 of the one-sided energy sits in the centre bin.
  CHECK(oracle_fraction == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  double impl_total = 0.0;
  for (int b = 0; b <= fft_size / 2; ++b) impl_total += std::norm(snap.frames[0](0, b));
  const double impl_fraction = std::norm(snap.frames[0](0, bin)) / impl_total;
  CHECK(impl_fraction == doctest::Approx(oracle_fraction).epsilon(1e-9));
  CHECK(impl_fraction > 0.60);
  // full-scale sine at a bin centre: unit magnitude by window normalization
  CHECK(std::abs(snap.frames[0](0, bin)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("select_bands: max power policy") {
  const auto geom = build_triangular_array(0.30, 2);
  SourceScenario sc;
  sc.azimuths = {1.0};
  sc.duration_samples = 256 * 64;
  const auto sig = simulate_farfield(geom, sc, 21);
  const auto snap = stft(sig, 256);

  const auto bands = select_bands(snap, 20, BandPolicy::kMaxPower);
  CHECK(bands.size() == 20);
  std::set<int> uniq(bands.begin(), bands.end());
  CHECK(uniq.size() == 20);
  for (int b : bands) {
    CHECK(b != 0);
    CHECK(b != 128);
  }

  CHECK_THROWS_AS((void)select_bands(snap, 0, BandPolicy::kMaxPower), std::invalid_argument);
  CHECK_THROWS_AS((void)select_bands(snap, 128, BandPolicy::kMaxPower),
                  std::invalid_argument);

  // single tone: its bin wins
  const auto tone = tone_signal(41, 256, 8, 16000.0);
  const auto tsnap = stft(tone, 256);
  CHECK(select_bands(tsnap, 1, BandPolicy::kMaxPower) == std::vector<int>{41});

  // explicit list passes validation unchanged
  const std::vector<int> wanted = {5, 9, 70};
  CHECK(select_bands(tsnap, 3, BandPolicy::kExplicitList, wanted) == wanted);
  CHECK_THROWS_AS((void)select_bands(tsnap, 1, BandPolicy::kExplicitList, {0}),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)select_bands(tsnap, 1, BandPolicy::kExplicitList, {128}),
                  std::invalid_argument);
}

TEST_CASE("visibilities: identical channels give equal real positive entries") {
  const auto tone = tone_signal(30, 256, 16, 16000.0);
  MultichannelSignal three;
  three.sample_rate = tone.sample_rate;
  three.channels.assign(3, tone.channels[0]);
  const auto snap = stft(three, 256);
  const auto vis = estimate_visibilities(snap, {30});
  REQUIRE(vis.bands.size() == 1);
  const auto& a = vis.bands[0].a;
  REQUIRE(a.size() == 6);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a[i].imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a[i].real() > 0.0);
    CHECK(a[i].real() == doctest::Approx(a[0].real()).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)estimate_visibilities(snap, {}), std::invalid_argument);
}

TEST_CASE("visibilities: conjugate symmetry holds exactly") {
  const auto geom = build_triangular_array(0.15, 3);
  SourceScenario sc;
  sc.azimuths = {0.9, 3.8};
  sc.duration_samples = 256 * 32;
  const auto sig = simulate_farfield(geom, sc, 5);
  const auto snap = stft(sig, 256);
  const auto vis = estimate_visibilities(snap, select_bands(snap, 5, BandPolicy::kMaxPower));
  const auto pairs = ordered_pairs(geom.num_mics());
  for (const auto& band : vis.bands) {
    for (std::size_t i = 0; i < pairs.size(); ++i)
      for (std::size_t j = 0; j < pairs.size(); ++j)
        if (pairs[j] == std::make_pair(pairs[i].second, pairs[i].first))
          CHECK(band.a[i] == std::conj(band.a[j]));
  }
}

TEST_CASE("visibilities: noiseless single source matches the exact model") {
  // long average so the entry-wise contracts are meaningful
  const auto geom = build_triangular_array(0.15, 4);
  const double az = 2.35;
  SourceScenario sc;
  sc.azimuths = {az};
  sc.duration_samples = 256 * 2048;
  const auto sig = simulate_farfield(geom, sc, 77);
  const auto snap = stft(sig, 256);
  const std::vector<int> bins = {25, 44, 61};
  const auto vis = estimate_visibilities(snap, bins);
  const auto bl = baselines(geom);

  // per-bin source power for a unit-variance source: window energy 6/N
  const double sigma2 = 6.0 / 256.0;
  for (const auto& band : vis.bands) {
    const auto exact = testutil::exact_visibilities(bl, band.omega, {az}, {sigma2});
    double mag_lo = 1e300, mag_hi = 0.0;
    for (int i = 0; i < band.a.size(); ++i) {
      mag_lo = std::min(mag_lo, std::abs(band.a[i]));
      mag_hi = std::max(mag_hi, std::abs(band.a[i]));
      // phase agrees with -w <p, dr> modulo 2pi
      double dphase = std::arg(band.a[i] * std::conj(exact[i]));
      CHECK(std::abs(dphase) < 0.1);
    }
    CHECK(mag_hi / mag_lo < 1.0 / 0.9);  // constant magnitude within 10%
  }
}

TEST_CASE("visibilities: N=256 snapshots stay within 15% of the model (seed-averaged)") {
  const auto geom = build_triangular_array(0.15, 3);
  const double az = 0.62;
  const double sigma2 = 6.0 / 256.0;
  const auto bl = baselines(geom);
  double total_rel = 0.0;
  int count = 0;
  for (std::uint64_t seed : {11u, 22u, 33u}) {
    SourceScenario sc;
    sc.azimuths = {az};
    sc.duration_samples = 256 * 256;
    const auto sig = simulate_farfield(geom, sc, seed);
    const auto snap = stft(sig, 256);
    const std::vector<int> bins = {30, 50};
    const auto vis = estimate_visibilities(snap, bins);
    for (const auto& band : vis.bands) {
      const auto exact = testutil::exact_visibilities(bl, band.omega, {az}, {sigma2});
      for (int i = 0; i < band.a.size(); ++i) {
        total_rel += std::abs(band.a[i] - exact[i]) / std::abs(exact[i]);
        ++count;
      }
    }
  }
  CHECK(total_rel / count < 0.15);
}

TEST_CASE("visibilities: averaging is linear across independent sources") {
  const auto geom = build_triangular_array(0.15, 3);
  SourceScenario s1, s2, s12;
  s1.azimuths = {0.5};
  s2.azimuths = {2.8};
  s12.azimuths = {0.5, 2.8};
  s1.duration_samples = s2.duration_samples = s12.duration_samples = 256 * 1024;
  // same seed: the combined scenario reuses the same per-source streams
  const auto sig1 = simulate_farfield(geom, s1, 400);
  SourceScenario s2_shifted = s2;
  const auto sig2 = simulate_farfield(geom, s2_shifted, 401);
  const auto sig12 = simulate_farfield(geom, s12, 400);

  const std::vector<int> bins = {40};
  const auto v1 = estimate_visibilities(stft(sig1, 256), bins);
  const auto v2 = estimate_visibilities(stft(sig2, 256), bins);
  const auto v12 = estimate_visibilities(stft(sig12, 256), bins);
  // cross terms average out; compare against the sum of the solo runs
  const double scale = v12.bands[0].a.norm();
  CHECK((v12.bands[0].a - v1.bands[0].a - v2.bands[0].a).norm() < 0.12 * scale);
}

TEST_CASE("visibility bootstrap variance shrinks with snapshot count") {
  const auto geom = build_triangular_array(0.15, 3);
  SourceScenario sc;
  sc.azimuths = {1.9};
  sc.duration_samples = 256 * 1024;
  auto sig = simulate_farfield(geom, sc, 9);
  sig = add_noise(sig, 10.0, 10);
  const auto snap = stft(sig, 256);
  const std::vector<int> bins = {33, 48};

  SnapshotTensor head = snap;
  head.frames.resize(128);
  const auto vis_short = estimate_visibilities(head, bins);
  const auto vis_long = estimate_visibilities(snap, bins);
  CHECK(vis_long.bootstrap_variance < vis_short.bootstrap_variance);
  CHECK(vis_long.bootstrap_variance > 0.0);
}
