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
#include <fstream>

#include "sim.hpp"
#include "testutil.hpp"
#include "wav.hpp"

using namespace frida;

namespace {

// plain time-domain cross-correlation r[lag] = sum_t a[t] b[t+lag]
double xcorr_at(const std::vector<double>& a, const std::vector<double>& b, int lag) {
  double acc = 0.0;
  const int n = static_cast<int>(a.size());
  for (int t = std::max(0, -lag); t + lag < n && t < n; ++t) acc += a[t] * b[t + lag];
  return acc;
}

int xcorr_argmax(const std::vector<double>& a, const std::vector<double>& b, int range) {
  int best = 0;
  double best_v = -1e300;
  for (int lag = -range; lag <= range; ++lag) {
    const double v = xcorr_at(a, b, lag);
    if (v > best_v) {
      best_v = v;
      best = lag;
    }
  }
  return best;
}

// sub-sample delay: band-limited (sinc) interpolation of the correlation
// around its coarse peak, then a fine parabolic touch-up
double xcorr_delay(const std::vector<double>& a, const std::vector<double>& b, int range) {
  const int peak = xcorr_argmax(a, b, range);
  const int half = 24;
  std::vector<double> r(2 * half + 1);
  for (int i = -half; i <= half; ++i) r[i + half] = xcorr_at(a, b, peak + i);
  auto interp = [&](double tau) {
    double acc = 0.0;
    for (int i = -half; i <= half; ++i) {
      const double t = tau - i;
      const double s = std::abs(t) < 1e-12 ? 1.0 : std::sin(frida::kPi * t) / (frida::kPi * t);
      acc += r[i + half] * s;
    }
    return acc;
  };
  double best_tau = 0.0, best_v = -1e300;
  for (int s = -16; s <= 16; ++s) {
    const double tau = s / 16.0;
    const double v = interp(tau);
    if (v > best_v) {
      best_v = v;
      best_tau = tau;
    }
  }
  const double d = 1.0 / 16.0;
  const double rm = interp(best_tau - d), r0 = interp(best_tau), rp = interp(best_tau + d);
  const double denom = rm - 2.0 * r0 + rp;
  const double frac = denom != 0.0 ? 0.5 * (rm - rp) / denom : 0.0;
  return peak + best_tau + frac * d;
}

double power_of(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc / static_cast<double>(x.size());
}

}  // namespace

TEST_CASE("fractional delay filter: unit energy, exact at zero fraction") {
  const auto t0 = fractional_delay_filter(0.0);
  double e = 0.0;
  for (double v : t0) e += v * v;
  CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(t0[kFractionalDelayTaps / 2] == doctest::Approx(1.0));

  const auto t5 = fractional_delay_filter(0.5);
  e = 0.0;
  for (double v : t5) e += v * v;
  CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("simulate_farfield: cross-correlation peaks at the geometric lag") {
  // source broadside of a two-mic pair: mic at (d, 0) hears the
  // source-at-0-degrees wave d/c later
  const double d = 0.12, fs = 16000.0, c = 343.0;
  std::vector<Eigen::Vector2d> pos = {{0, 0}, {d, 0}};
  ArrayGeometry geom(pos, c);
  SourceScenario sc;
  sc.azimuths = {0.0};
  sc.duration_samples = 8192;
  sc.sample_rate = fs;
  const auto sig = simulate_farfield(geom, sc, 99);
  REQUIRE(sig.num_channels() == 2);
  const int expect = static_cast<int>(std::lround(d / c * fs));
  CHECK(xcorr_argmax(sig.channels[0], sig.channels[1], 30) == expect);
}

TEST_CASE("simulate_farfield: relative delays match <p, dr> within 0.1 sample") {
  Rng rng(0xFA2ULL);
  const auto geom = build_triangular_array(0.30, 3);
  const double fs = 16000.0;
  for (double az : {0.3, 2.1, 4.9}) {
    SourceScenario sc;
    sc.azimuths = {az};
    sc.duration_samples = 16384;
    sc.sample_rate = fs;
    const auto sig = simulate_farfield(geom, sc, rng.next_u64());
    const Eigen::Vector2d p(std::cos(az), std::sin(az));
    const auto bl = baselines(geom);
    for (int i = 0; i < bl.size(); i += 7) {
      const auto [q, qp] = bl.pairs[i];
      const double expected = fs * p.dot(bl.deltas[i]);  // samples
      const double measured = xcorr_delay(sig.channels[qp], sig.channels[q], 30);
      CHECK(std::abs(measured - expected) < 0.1);
    }
  }
}

TEST_CASE("simulate_farfield: white-noise power preserved through the delay chain") {
  std::vector<Eigen::Vector2d> pos = {{0.05, 0.02}, {-0.07, 0.01}, {0.0, -0.06}};
  ArrayGeometry geom(pos);
  SourceScenario sc;
  sc.azimuths = {1.1};
  sc.duration_samples = 65536;
  const auto sig = simulate_farfield(geom, sc, 1234);
  // single unit-variance source through a unit-energy filter
  for (const auto& ch : sig.channels)
    CHECK(power_of(ch) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("simulate_farfield: determinism and validation") {
  const auto geom = build_triangular_array(0.30, 2);
  SourceScenario sc;
  sc.azimuths = {0.5, 3.5};
  sc.duration_samples = 2048;
  const auto a = simulate_farfield(geom, sc, 7);
  const auto b = simulate_farfield(geom, sc, 7);
  for (int q = 0; q < a.num_channels(); ++q) CHECK(a.channels[q] == b.channels[q]);

  SourceScenario bad = sc;
  bad.duration_samples = 10;  // shorter than the filter
  CHECK_THROWS_AS((void)simulate_farfield(geom, bad, 7), std::invalid_argument);
  bad = sc;
  bad.azimuths = {1.0, 1.0};
  CHECK_THROWS_AS((void)simulate_farfield(geom, bad, 7), std::invalid_argument);
  bad = sc;
  bad.azimuths.clear();
  CHECK_THROWS_AS((void)simulate_farfield(geom, bad, 7), std::invalid_argument);
}

TEST_CASE("add_noise: infinite SNR passes through, 0 dB matches powers") {
  const auto geom = build_triangular_array(0.30, 2);
  SourceScenario sc;
  sc.azimuths = {2.2};
  sc.duration_samples = 65536;
  const auto clean = simulate_farfield(geom, sc, 5);

  const auto same = add_noise(clean, std::numeric_limits<double>::infinity(), 11);
  for (int q = 0; q < clean.num_channels(); ++q) CHECK(same.channels[q] == clean.channels[q]);

  const auto noisy = add_noise(clean, 0.0, 11);
  double sig_p = 0.0;
  for (const auto& ch : clean.channels) sig_p += power_of(ch);
  sig_p /= clean.num_channels();
  for (int q = 0; q < clean.num_channels(); ++q) {
    std::vector<double> noise(clean.channels[q].size());
    for (std::size_t t = 0; t < noise.size(); ++t)
      noise[t] = noisy.channels[q][t] - clean.channels[q][t];
    CHECK(power_of(noise) == doctest::Approx(sig_p).epsilon(0.05));
  }

  // different seeds: different realizations, same power scale
  const auto noisy2 = add_noise(clean, 0.0, 12);
  CHECK(noisy2.channels[0] != noisy.channels[0]);
  std::vector<double> n2(clean.channels[0].size());
  for (std::size_t t = 0; t < n2.size(); ++t)
    n2[t] = noisy2.channels[0][t] - clean.channels[0][t];
  CHECK(power_of(n2) == doctest::Approx(sig_p).epsilon(0.05));
}

TEST_CASE("wav round trip and format validation") {
  const auto geom = build_triangular_array(0.30, 2);
  SourceScenario sc;
  sc.azimuths = {0.7};
  sc.duration_samples = 4096;
  const auto sig = simulate_farfield(geom, sc, 3);

  const std::string path = "wav_roundtrip_test.wav";
  save_wav(path, sig);
  const auto back = load_wav(path);
  REQUIRE(back.num_channels() == sig.num_channels());
  REQUIRE(back.num_samples() == sig.num_samples());
  CHECK(back.sample_rate == sig.sample_rate);
  // 16-bit quantization with peak normalization: correlation stays high
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::int64_t t = 0; t < sig.num_samples(); ++t) {
    dot += sig.channels[0][t] * back.channels[0][t];
    na += sig.channels[0][t] * sig.channels[0][t];
    nb += back.channels[0][t] * back.channels[0][t];
  }
  CHECK(dot / std::sqrt(na * nb) > 0.999);
  std::remove(path.c_str());

  CHECK_THROWS_AS((void)load_wav("missing_file.wav"), IoError);
  const std::string bad = "bad_test.wav";
  {
    std::ofstream f(bad, std::ios::binary);
    f << "definitely not a wav file";
  }
  CHECK_THROWS_AS((void)load_wav(bad), IoError);
  std::remove(bad.c_str());
}
