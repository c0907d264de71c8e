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

#include "baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frida {

namespace {

void validate_inputs(const SnapshotTensor& snap, const ArrayGeometry& geom,
                     const std::vector<int>& bands, int num_sources,
                     const AngularGrid& grid) {
  if (num_sources < 1) throw std::invalid_argument("doa grid search: K must be >= 1");
  if (bands.empty()) throw std::invalid_argument("doa grid search: empty band list");
  if (snap.num_channels() != geom.num_mics())
    throw std::invalid_argument("doa grid search: channel count != mic count");
  if (grid.resolution < 4 * num_sources)
    throw std::invalid_argument("doa grid search: grid resolution must be >= 4K");
  for (int b : bands)
    if (b < 0 || b >= snap.num_bins())
      throw std::invalid_argument("doa grid search: band out of range");
}

// Q x resolution matrix of steering vectors exp(-j w <p(theta), r_q>/c).
Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geom, double omega,
                                 const AngularGrid& grid) {
  const int q = geom.num_mics();
  Eigen::MatrixXcd v(q, grid.resolution);
  const double c = geom.speed_of_sound();
  for (int i = 0; i < grid.resolution; ++i) {
    const double th = grid.angle(i);
    const Eigen::Vector2d p(std::cos(th), std::sin(th));
    for (int m = 0; m < q; ++m) {
      const double phase = -omega * p.dot(geom.position(m)) / c;
      v(m, i) = cplx(std::cos(phase), std::sin(phase));
    }
  }
  return v;
}

GridSearchResult finish(std::vector<double> spectrum, int num_sources,
                        const AngularGrid& grid) {
  GridSearchResult res;
  const auto peaks = pick_peaks(spectrum, num_sources);
  for (int i : peaks) res.azimuths.push_back(grid.angle(i));
  std::sort(res.azimuths.begin(), res.azimuths.end());
  const double mean =
      std::accumulate(spectrum.begin(), spectrum.end(), 0.0) / spectrum.size();
  const double peak = *std::max_element(spectrum.begin(), spectrum.end());
  res.low_confidence = !(mean > 0.0) || peak / mean < 1.5;
  res.spectrum = std::move(spectrum);
  return res;
}

}  // namespace

std::vector<int> pick_peaks(const std::vector<double>& spectrum, int count) {
  const int n = static_cast<int>(spectrum.size());
  std::vector<int> maxima;
  for (int i = 0; i < n; ++i) {
    const double prev = spectrum[(i + n - 1) % n];
    const double next = spectrum[(i + 1) % n];
    if (spectrum[i] >= prev && spectrum[i] >= next &&
        (spectrum[i] > prev || spectrum[i] > next))
      maxima.push_back(i);
  }
  auto by_value = [&](int a, int b) {
    if (spectrum[a] != spectrum[b]) return spectrum[a] > spectrum[b];
    return a < b;
  };
  std::sort(maxima.begin(), maxima.end(), by_value);

  auto circular_steps = [&](int a, int b) {
    const int d = std::abs(a - b);
    return std::min(d, n - d);
  };
  std::vector<int> picked;
  auto try_take = [&](const std::vector<int>& pool) {
    for (int i : pool) {
      if (static_cast<int>(picked.size()) >= count) break;
      bool ok = true;
      for (int p : picked)
        if (circular_steps(i, p) < 2) ok = false;
      if (ok) picked.push_back(i);
    }
  };
  try_take(maxima);
  if (static_cast<int>(picked.size()) < count) {
    // flat or degenerate spectra: fall back to the best remaining bins
    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::sort(all.begin(), all.end(), by_value);
    try_take(all);
    for (int i : all) {
      if (static_cast<int>(picked.size()) >= count) break;
      if (std::find(picked.begin(), picked.end(), i) == picked.end()) picked.push_back(i);
    }
  }
  picked.resize(std::min<std::size_t>(picked.size(), count));
  return picked;
}

GridSearchResult music_incoherent(const SnapshotTensor& snap, const ArrayGeometry& geom,
                                  const std::vector<int>& bands, int num_sources,
                                  const AngularGrid& grid) {
  validate_inputs(snap, geom, bands, num_sources, grid);
  const int q = geom.num_mics();
  if (num_sources >= q)
    throw std::invalid_argument("music: needs K < Q");
  const int nsnap = snap.num_snapshots();
  if (nsnap < 1) throw std::invalid_argument("music: no snapshots");

  std::vector<double> fused(grid.resolution, 0.0);
  for (int b : bands) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(q, q);
    for (int n = 0; n < nsnap; ++n) {
      const Eigen::VectorXcd y = snap.frames[n].col(b);
      r.noalias() += y * y.adjoint();
    }
    r /= static_cast<double>(nsnap);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.info() != Eigen::Success)
      throw NumericalError("music: covariance eigendecomposition failed");
    // noise subspace: eigenvectors of the Q-K smallest eigenvalues
    const Eigen::MatrixXcd noise = eig.eigenvectors().leftCols(q - num_sources);

    const Eigen::MatrixXcd v = steering_matrix(geom, snap.bin_frequencies[b], grid);
    const Eigen::MatrixXcd proj = noise.adjoint() * v;  // (Q-K) x resolution
    Eigen::VectorXd denom = proj.cwiseAbs2().colwise().sum().real();

    double peak = 0.0;
    std::vector<double> ps(grid.resolution);
    for (int i = 0; i < grid.resolution; ++i) {
      ps[i] = 1.0 / std::max(denom[i], 1e-300);
      peak = std::max(peak, ps[i]);
    }
    if (peak > 0.0)
      for (int i = 0; i < grid.resolution; ++i) fused[i] += ps[i] / peak;
  }
  for (double& v : fused) v /= static_cast<double>(bands.size());
  return finish(std::move(fused), num_sources, grid);
}

GridSearchResult srp_phat(const SnapshotTensor& snap, const ArrayGeometry& geom,
                          const std::vector<int>& bands, int num_sources,
                          const AngularGrid& grid) {
  validate_inputs(snap, geom, bands, num_sources, grid);
  const int q = geom.num_mics();
  const auto pairs = ordered_pairs(q);
  const auto vis = estimate_visibilities(snap, bands);

  std::vector<double> fused(grid.resolution, 0.0);
  for (std::size_t bi = 0; bi < vis.bands.size(); ++bi) {
    const auto& band = vis.bands[bi];
    // Phase transform; zero-magnitude entries get zero weight. The steered
    // pair sum sum_(q,q') w_qq' e^{+jw<p,dr>} equals v^H W v with v the
    // steering vector, which turns the grid scan into one GEMM.
    Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(q, q);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double mag = std::abs(band.a[p]);
      w(pairs[p].first, pairs[p].second) =
          mag > 1e-300 ? band.a[p] / mag : cplx(0.0, 0.0);
    }
    const Eigen::MatrixXcd v = steering_matrix(geom, band.omega, grid);
    const Eigen::MatrixXcd wv = w * v;
    const Eigen::VectorXd s =
        v.conjugate().cwiseProduct(wv).colwise().sum().real().transpose();
    for (int i = 0; i < grid.resolution; ++i) fused[i] += s[i];
  }
  return finish(std::move(fused), num_sources, grid);
}

}  // namespace frida
