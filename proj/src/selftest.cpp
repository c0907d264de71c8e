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

#include "selftest.hpp"

#include <cmath>

#include <json.hpp>

#include "bessel.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace frida {

namespace {

// Exact cross-correlations of point sources: entry per ordered pair is
// sum_k sigma_k^2 e^{-j w <p_k, dr>}.
Eigen::VectorXcd exact_visibilities(const BaselineSet& bl, double omega,
                                    const std::vector<double>& azimuths,
                                    const std::vector<double>& powers) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(bl.size());
  for (std::size_t k = 0; k < azimuths.size(); ++k) {
    const Eigen::Vector2d p(std::cos(azimuths[k]), std::sin(azimuths[k]));
    for (int r = 0; r < bl.size(); ++r) {
      const double phase = -omega * p.dot(bl.deltas[r]);
      a[r] += powers[k] * cplx(std::cos(phase), std::sin(phase));
    }
  }
  return a;
}

// Fourier samples of the same intensity: b_m = (1/2pi) sum_k sigma_k^2 e^{-j m phi_k}.
Eigen::VectorXcd intensity_coefficients(int max_order,
                                        const std::vector<double>& azimuths,
                                        const std::vector<double>& powers) {
  Eigen::VectorXcd b(2 * max_order + 1);
  for (int m = -max_order; m <= max_order; ++m) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < azimuths.size(); ++k)
      acc += powers[k] * cplx(std::cos(m * azimuths[k]), -std::sin(m * azimuths[k]));
    b[m + max_order] = acc / kTwoPi;
  }
  return b;
}

SelfTestCheck check_bessel() {
  SelfTestCheck c{"bessel-spot-values"};
  struct Spot {
    int m;
    double x;
    double expected;
    double tol;
  };
  // First zero of J_0 to 1e-10; other values are exact identities.
  const Spot spots[] = {
      {0, 0.0, 1.0, 1e-15},
      {1, 0.0, 0.0, 1e-15},
      {0, 2.404825557695773, 0.0, 1e-10},
  };
  double worst = 0.0;
  bool ok = true;
  for (const auto& s : spots) {
    const double err = std::abs(bessel_j(s.m, s.x) - s.expected);
    worst = std::max(worst, err);
    if (err > s.tol) ok = false;
  }
  // Negative-order identity on a few arguments.
  for (int m = 1; m <= 5; ++m) {
    const double x = 1.7 * m;
    const double err =
        std::abs(bessel_j(-m, x) - (m % 2 ? -1.0 : 1.0) * bessel_j(m, x));
    worst = std::max(worst, err);
    if (err > 1e-14) ok = false;
  }
  c.passed = ok;
  c.detail = "max deviation " + std::to_string(worst);
  return c;
}

SelfTestCheck check_forward_model() {
  SelfTestCheck c{"forward-model"};
  Rng rng(0xF0D1A5ULL);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Eigen::Vector2d> pos;
    const int q = 6 + trial;
    for (int i = 0; i < q; ++i)
      pos.emplace_back(rng.uniform(-0.15, 0.15), rng.uniform(-0.15, 0.15));
    ArrayGeometry geom(pos);
    const auto bl = baselines(geom);
    const double omega = kTwoPi * rng.uniform(500.0, 4000.0);
    const int k = 1 + trial % 3;
    std::vector<double> az, pw;
    for (int i = 0; i < k; ++i) {
      az.push_back(rng.uniform(0.0, kTwoPi));
      pw.push_back(rng.uniform(0.5, 2.0));
    }
    const auto trunc = choose_truncation(geom, omega, k);
    const auto g = build_mapping(bl, omega, trunc, /*enforce_rank=*/false);
    const auto b = intensity_coefficients(trunc.max_order, az, pw);
    const auto exact = exact_visibilities(bl, omega, az, pw);
    const double rel = (g.entries * b - exact).norm() / exact.norm();
    worst = std::max(worst, rel);
  }
  c.passed = worst <= 1e-6;
  c.detail = "max relative mismatch " + std::to_string(worst);
  return c;
}

SelfTestCheck check_annihilation() {
  SelfTestCheck c{"annihilation-identities"};
  Rng rng(0xA111ULL);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + static_cast<int>(rng.uniform(0, 6));
    const int k = 1 + static_cast<int>(rng.uniform(0, 3));
    Eigen::VectorXcd b(2 * m + 1), h(k + 1);
    for (int i = 0; i < b.size(); ++i) b[i] = rng.gaussian_complex();
    for (int i = 0; i < h.size(); ++i) h[i] = rng.gaussian_complex();
    const Eigen::VectorXcd lhs = toeplitz_of(b, k + 1) * h;
    const Eigen::VectorXcd rhs = right_dual_of(h, 2 * m + 1) * b;
    worst = std::max(worst, (lhs - rhs).norm());
  }
  // single-sinusoid witness
  const double phi = 1.234;
  const int m = 7;
  Eigen::VectorXcd b(2 * m + 1);
  for (int i = -m; i <= m; ++i) b[i + m] = std::polar(1.0, -i * phi);
  Eigen::VectorXcd h(2);
  h << 1.0, -std::polar(1.0, -phi);
  h /= h.norm();
  worst = std::max(worst, (toeplitz_of(b, 2) * h).norm());
  c.passed = worst <= 1e-12;
  c.detail = "max identity residual " + std::to_string(worst);
  return c;
}

SelfTestCheck check_roots() {
  SelfTestCheck c{"filter-roots"};
  Rng rng(0x4007ULL);
  c.passed = true;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform(0, 4));
    std::vector<double> az;
    for (int i = 0; i < k; ++i) az.push_back(rng.uniform(0.0, kTwoPi));
    Eigen::VectorXcd h(1);
    h[0] = 1.0;
    for (double a : az) {
      Eigen::VectorXcd next = Eigen::VectorXcd::Zero(h.size() + 1);
      const cplx root = std::polar(1.0, -a);
      for (int i = 0; i < h.size(); ++i) {
        next[i] += h[i];
        next[i + 1] -= h[i] * root;
      }
      h = next;
    }
    auto ext = extract_azimuths(h);
    if (ext.azimuths.size() != az.size()) {
      c.passed = false;
      continue;
    }
    std::sort(az.begin(), az.end());
    std::sort(ext.azimuths.begin(), ext.azimuths.end());
    for (std::size_t i = 0; i < az.size(); ++i) {
      double d = std::abs(az[i] - ext.azimuths[i]);
      d = std::min(d, kTwoPi - d);
      worst = std::max(worst, d);
    }
  }
  if (worst > 1e-9) c.passed = false;
  c.detail = "max root angle error " + std::to_string(worst);
  return c;
}

SelfTestCheck check_recovery() {
  SelfTestCheck c{"noiseless-recovery"};
  ArrayGeometry geom = build_triangular_array(0.30, 4);
  const auto bl = baselines(geom);
  const std::vector<double> az = {0.8, 2.9};
  const std::vector<double> pw = {1.0, 1.5};
  std::vector<SubbandMeasurement> meas;
  std::vector<MappingMatrix> maps;
  for (double f : {900.0, 1500.0, 2200.0}) {
    const double omega = kTwoPi * f;
    const auto trunc = choose_truncation(geom, omega, 2);
    maps.push_back(build_mapping(bl, omega, trunc));
    meas.push_back({omega, exact_visibilities(bl, omega, az, pw)});
  }
  const auto est = solve(meas, maps, bl, 2, SolverConfig{}, 7);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    double d = std::abs(est.azimuths[i] - az[i]);
    d = std::min(d, kTwoPi - d);
    worst = std::max(worst, d);
  }
  c.passed = worst < 1e-7;
  c.detail = "max azimuth error " + std::to_string(worst) + " rad";
  return c;
}

}  // namespace

SelfTestReport run_selftest(bool inject_bessel_fault) {
  SelfTestReport report;
  if (inject_bessel_fault) testing::set_bessel_fault(1e-3);
  report.checks.push_back(check_bessel());
  report.checks.push_back(check_forward_model());
  report.checks.push_back(check_annihilation());
  report.checks.push_back(check_roots());
  report.checks.push_back(check_recovery());
  if (inject_bessel_fault) testing::set_bessel_fault(0.0);
  return report;
}

std::string selftest_to_json(const SelfTestReport& report) {
  nlohmann::ordered_json j;
  j["all_passed"] = report.all_passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["passed"] = c.passed;
    jc["detail"] = c.detail;
    arr.push_back(std::move(jc));
  }
  j["checks"] = std::move(arr);
  return j.dump(2);
}

}  // namespace frida
