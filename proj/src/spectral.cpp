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

#include "spectral.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>
#include <unsupported/Eigen/FFT>

#include "geometry.hpp"

namespace frida {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Mean cross-correlations over a snapshot range [n0, n1).
void accumulate_visibilities(const SnapshotTensor& snap, const std::vector<int>& bins,
                             int n0, int n1,
                             std::vector<Eigen::VectorXcd>& out) {
  const int q = snap.num_channels();
  const auto pairs = ordered_pairs(q);
  out.assign(bins.size(), Eigen::VectorXcd::Zero(pairs.size()));
  for (std::size_t bi = 0; bi < bins.size(); ++bi) {
    const int bin = bins[bi];
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(q, q);
    for (int n = n0; n < n1; ++n) {
      const Eigen::VectorXcd y = snap.frames[n].col(bin);
      r.noalias() += y * y.adjoint();
    }
    r /= static_cast<double>(n1 - n0);
    for (std::size_t p = 0; p < pairs.size(); ++p)
      out[bi][p] = r(pairs[p].first, pairs[p].second);
  }
}

}  // namespace

SnapshotTensor stft(const MultichannelSignal& sig, int fft_size) {
  if (!is_pow2(fft_size) || fft_size < 4)
    throw std::invalid_argument("stft: fft_size must be a power of two >= 4");
  if (sig.num_samples() < fft_size)
    throw std::invalid_argument("stft: signal shorter than one frame");
  const int q = sig.num_channels();
  const int bins = fft_size / 2 + 1;
  const int snapshots = static_cast<int>(sig.num_samples() / fft_size);

  // Hann, scaled so sum(w) = 2: a unit sine at a bin center gives |Y| = 1.
  std::vector<double> window(fft_size);
  double wsum = 0.0;
  for (int n = 0; n < fft_size; ++n) {
    window[n] = 0.5 * (1.0 - std::cos(kTwoPi * n / fft_size));
    wsum += window[n];
  }
  for (double& w : window) w *= 2.0 / wsum;

  SnapshotTensor out;
  out.fft_size = fft_size;
  out.sample_rate = sig.sample_rate;
  out.bin_frequencies.resize(bins);
  for (int b = 0; b < bins; ++b)
    out.bin_frequencies[b] = kTwoPi * b * sig.sample_rate / fft_size;

  Eigen::FFT<double> fft;
  std::vector<double> frame(fft_size);
  std::vector<cplx> spec(fft_size);
  out.frames.assign(snapshots, Eigen::MatrixXcd(q, bins));
  for (int n = 0; n < snapshots; ++n) {
    for (int ch = 0; ch < q; ++ch) {
      const double* src = sig.channels[ch].data() + static_cast<std::ptrdiff_t>(n) * fft_size;
      for (int i = 0; i < fft_size; ++i) frame[i] = src[i] * window[i];
      fft.fwd(spec, frame);
      for (int b = 0; b < bins; ++b) out.frames[n](ch, b) = spec[b];
    }
  }
  return out;
}

Eigen::VectorXd band_power(const SnapshotTensor& snap) {
  Eigen::VectorXd power = Eigen::VectorXd::Zero(snap.num_bins());
  for (const auto& f : snap.frames) power += f.cwiseAbs2().colwise().sum().real();
  return power;
}

std::vector<int> select_bands(const SnapshotTensor& snap, int count, BandPolicy policy,
                              const std::vector<int>& explicit_bins) {
  const int bins = snap.num_bins();
  const int nyquist = bins - 1;
  if (policy == BandPolicy::kExplicitList) {
    for (int b : explicit_bins)
      if (b < 1 || b >= nyquist)
        throw std::invalid_argument("select_bands: bin " + std::to_string(b) +
                                    " outside (0, nyquist)");
    return explicit_bins;
  }
  if (count < 1 || count > nyquist - 1)
    throw std::invalid_argument("select_bands: count out of range");

  const Eigen::VectorXd power = band_power(snap);
  std::vector<int> idx(nyquist - 1);
  std::iota(idx.begin(), idx.end(), 1);  // skip DC; nyquist excluded by range
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (power[a] != power[b]) return power[a] > power[b];
    return a < b;
  });
  idx.resize(count);
  return idx;
}

VisibilitySet estimate_visibilities(const SnapshotTensor& snap,
                                    const std::vector<int>& bins) {
  if (bins.empty()) throw std::invalid_argument("estimate_visibilities: empty band list");
  const int n = snap.num_snapshots();
  if (n < 2) throw std::invalid_argument("estimate_visibilities: need at least 2 snapshots");
  for (int b : bins)
    if (b < 0 || b >= snap.num_bins())
      throw std::invalid_argument("estimate_visibilities: bin out of range");

  VisibilitySet vis;
  std::vector<Eigen::VectorXcd> full;
  accumulate_visibilities(snap, bins, 0, n, full);
  vis.bands.resize(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    vis.bands[i].omega = snap.bin_frequencies[bins[i]];
    vis.bands[i].a = std::move(full[i]);
  }

  // Split-half bootstrap: var(mean) ~ mean |a_half1 - a_half2|^2 / 4.
  if (n >= 4) {
    std::vector<Eigen::VectorXcd> h1, h2;
    accumulate_visibilities(snap, bins, 0, n / 2, h1);
    accumulate_visibilities(snap, bins, n / 2, 2 * (n / 2), h2);
    double acc = 0.0;
    std::int64_t cnt = 0;
    for (std::size_t i = 0; i < bins.size(); ++i) {
      acc += (h1[i] - h2[i]).squaredNorm();
      cnt += h1[i].size();
    }
    vis.bootstrap_variance = acc / (4.0 * static_cast<double>(cnt));
  }
  return vis;
}

std::string visibilities_to_json(const VisibilitySet& vis, const std::vector<int>& bins) {
  nlohmann::json j;
  j["bootstrap_variance"] = vis.bootstrap_variance;
  j["bands"] = nlohmann::json::array();
  for (std::size_t i = 0; i < vis.bands.size(); ++i) {
    nlohmann::json b;
    if (i < bins.size()) b["bin"] = bins[i];
    b["omega"] = vis.bands[i].omega;
    auto arr = nlohmann::json::array();
    for (int p = 0; p < vis.bands[i].a.size(); ++p)
      arr.push_back({vis.bands[i].a[p].real(), vis.bands[i].a[p].imag()});
    b["a"] = std::move(arr);
    j["bands"].push_back(std::move(b));
  }
  return j.dump();
}

}  // namespace frida
