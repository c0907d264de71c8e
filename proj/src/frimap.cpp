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

#include "frimap.hpp"

#include <cmath>

#include <json.hpp>

#include "bessel.hpp"

namespace frida {

FourierTruncation choose_truncation(double max_baseline_norm_s, int num_pairs,
                                    double omega, int num_sources) {
  if (num_sources < 1) throw std::invalid_argument("choose_truncation: K must be >= 1");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("choose_truncation: omega must be finite and >= 0");
  const double x = omega * max_baseline_norm_s;
  const int buffer = std::max(10, static_cast<int>(std::ceil(9.0 * std::cbrt(x))));
  int m = static_cast<int>(std::ceil(x)) + buffer;
  m = std::max(m, num_sources + 2);
  m = std::min(m, (num_pairs - 1) / 2);
  if (m < num_sources)
    throw std::invalid_argument(
        "choose_truncation: array too small for requested model order (M=" +
        std::to_string(m) + " < K=" + std::to_string(num_sources) + ")");
  return FourierTruncation{m};
}

FourierTruncation choose_truncation(const ArrayGeometry& geom, double omega,
                                    int num_sources) {
  const int q = geom.num_mics();
  return choose_truncation(geom.max_pair_distance() / geom.speed_of_sound(),
                           q * (q - 1), omega, num_sources);
}

MappingMatrix build_mapping(const BaselineSet& bl, double omega,
                            const FourierTruncation& trunc, bool enforce_rank) {
  if (trunc.max_order < 0) throw std::invalid_argument("build_mapping: negative order");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("build_mapping: omega must be finite and >= 0");
  const int m = trunc.max_order;
  const int rows = bl.size();

  MappingMatrix g;
  g.omega = omega;
  g.max_order = m;
  g.entries.resize(rows, 2 * m + 1);

  // (-j)^m cycle
  const cplx mj_pow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

  for (int r = 0; r < rows; ++r) {
    const Eigen::Vector2d& dr = bl.deltas[r];
    const double x = omega * dr.norm();
    const double theta = std::atan2(dr.y(), dr.x());
    const std::vector<double> jm = bessel_j_sequence(m, x);
    for (int order = -m; order <= m; ++order) {
      const int a = std::abs(order);
      double jval = jm[a];
      if (order < 0 && (a % 2)) jval = -jval;  // J_{-m} = (-1)^m J_m
      const cplx rot = mj_pow[((order % 4) + 4) % 4];
      const cplx phase(std::cos(order * theta), std::sin(order * theta));
      g.entries(r, order + m) = kTwoPi * jval * rot * phase;
    }
  }

  if (enforce_rank) {
    // Conditioning check on the observable orders |m| <= x+4. The converged
    // tail columns always carry singular values at the truncation-error
    // level, so testing the full matrix would reject every healthy band;
    // the observable block is what the inverse problem rests on, and it
    // collapses for genuinely degenerate setups (hopelessly low frequency,
    // collinear arrays with their mirror ambiguity).
    double x_max = 0.0;
    for (const auto& d : bl.deltas) x_max = std::max(x_max, omega * d.norm());
    const int m_obs = std::min(m, static_cast<int>(std::ceil(x_max)) + 4);
    const auto block = g.entries.middleCols(m - m_obs, 2 * m_obs + 1);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(block);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || !(sv(sv.size() - 1) > 1e-8 * sv(0)))
      throw NumericalError(
          "degenerate geometry/truncation: mapping at omega=" + std::to_string(omega) +
          ", M=" + std::to_string(m) + " is rank deficient over observable orders " +
          std::to_string(m_obs) + " (sigma_min/sigma_max=" +
          std::to_string(sv.size() ? sv(sv.size() - 1) / sv(0) : 0.0) + ")");
  }
  return g;
}

std::string mapping_to_json(const MappingMatrix& g) {
  nlohmann::json j;
  j["omega"] = g.omega;
  j["max_order"] = g.max_order;
  auto rows = nlohmann::json::array();
  for (int r = 0; r < g.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < g.cols(); ++c)
      row.push_back({g.entries(r, c).real(), g.entries(r, c).imag()});
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j.dump();
}

}  // namespace frida
