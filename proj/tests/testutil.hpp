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
// Independent oracles shared by the test suites. These deliberately avoid
// the library's own code paths: visibilities come straight from the
// point-source cross-correlation formula, coefficients from the Fourier
// sum, filters from explicit root products.

#ifndef FRIDA_TESTS_TESTUTIL_HPP_
#define FRIDA_TESTS_TESTUTIL_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "geometry.hpp"
#include "rng.hpp"

namespace frida::testutil {

// Exact narrowband cross-correlations of uncorrelated far-field point
// sources: entry (q,q') = sum_k sigma_k^2 exp(-j w <p_k, dr_qq'>).
inline Eigen::VectorXcd exact_visibilities(const BaselineSet& bl, double omega,
                                           const std::vector<double>& azimuths,
                                           const std::vector<double>& powers) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(bl.size());
  for (std::size_t k = 0; k < azimuths.size(); ++k) {
    const Eigen::Vector2d p(std::cos(azimuths[k]), std::sin(azimuths[k]));
    for (int r = 0; r < bl.size(); ++r)
      a[r] += powers[k] * std::polar(1.0, -omega * p.dot(bl.deltas[r]));
  }
  return a;
}

// Fourier samples of the point-source intensity, orders -M..M:
// b_m = (1/2pi) sum_k sigma_k^2 e^{-j m phi_k}.
inline Eigen::VectorXcd intensity_coefficients(int max_order,
                                               const std::vector<double>& azimuths,
                                               const std::vector<double>& powers) {
  Eigen::VectorXcd b(2 * max_order + 1);
  for (int m = -max_order; m <= max_order; ++m) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < azimuths.size(); ++k)
      acc += powers[k] * std::polar(1.0, -static_cast<double>(m) * azimuths[k]);
    b[m + max_order] = acc / kTwoPi;
  }
  return b;
}

// Filter with roots exactly at e^{-j phi_k}, unit leading coefficient.
inline Eigen::VectorXcd filter_from_roots(const std::vector<double>& azimuths) {
  Eigen::VectorXcd h(1);
  h[0] = 1.0;
  for (double a : azimuths) {
    const cplx root = std::polar(1.0, -a);
    Eigen::VectorXcd next = Eigen::VectorXcd::Zero(h.size() + 1);
    for (int i = 0; i < h.size(); ++i) {
      next[i] += h[i];
      next[i + 1] -= h[i] * root;
    }
    h = next;
  }
  return h;
}

// Full valid (non-circular) convolution restricted to complete overlaps.
inline Eigen::VectorXcd conv_valid(const Eigen::VectorXcd& b, const Eigen::VectorXcd& h) {
  const int n = static_cast<int>(b.size());
  const int k = static_cast<int>(h.size()) - 1;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n - k);
  for (int i = 0; i < n - k; ++i)
    for (int l = 0; l <= k; ++l) out[i] += h[l] * b[k + i - l];
  return out;
}

// Smallest circular gap between an angle set and its estimate, after the
// obvious greedy pairing; convenience for exact-recovery checks.
inline double max_angle_error(std::vector<double> truth, std::vector<double> estimate) {
  std::sort(truth.begin(), truth.end());
  std::sort(estimate.begin(), estimate.end());
  if (truth.size() != estimate.size()) return kTwoPi;
  // circular alignment: try every rotation of the sorted estimate
  double best = kTwoPi;
  const int n = static_cast<int>(truth.size());
  for (int shift = 0; shift < n; ++shift) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double d = std::abs(truth[i] - estimate[(i + shift) % n]);
      d = std::min(d, kTwoPi - d);
      worst = std::max(worst, d);
    }
    best = std::min(best, worst);
  }
  return best;
}

inline ArrayGeometry random_geometry(Rng& rng, int num_mics, double radius_m = 0.15) {
  std::vector<Eigen::Vector2d> pos;
  for (int i = 0; i < num_mics; ++i)
    pos.emplace_back(rng.uniform(-radius_m, radius_m), rng.uniform(-radius_m, radius_m));
  return ArrayGeometry(std::move(pos));
}

}  // namespace frida::testutil

#endif  // FRIDA_TESTS_TESTUTIL_HPP_
