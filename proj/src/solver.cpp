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

#include "solver.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "nnls.hpp"
#include "rng.hpp"

namespace frida {

namespace {

// Per-band quantities that do not change across iterations or restarts.
// The Gram spectrum spans many orders of magnitude (converged Bessel tail),
// so the bracket R(h) A^{-1} R(h)^H is never formed explicitly: its small
// eigenvalues carry the strongly observed annihilation equations and would
// drown in the rounding noise of the large ones. Everything goes through
// A^{-1/2} and a QR factor instead.
struct BandWork {
  int n = 0;  // 2M+1
  Eigen::MatrixXcd g;
  Eigen::VectorXcd a;
  Eigen::MatrixXcd a_inv;       // (G^H G + w I)^{-1}
  Eigen::MatrixXcd a_inv_sqrt;  // (G^H G + w I)^{-1/2}
  Eigen::VectorXcd beta;        // LS projection of a
  Eigen::MatrixXcd t_beta;      // T(beta), (n-K) x (K+1)
  double base = 0.0;            // ||a - G beta||^2
};

// M * R(h)^H without forming R; column j of R^H holds conj(h) reversed on
// rows j..j+K.
Eigen::MatrixXcd times_dual_adjoint(const Eigen::MatrixXcd& m,
                                    const Eigen::VectorXcd& h, int n) {
  const int k = static_cast<int>(h.size()) - 1;
  Eigen::MatrixXcd s(n, n - k);
  for (int j = 0; j < n - k; ++j) {
    s.col(j).setZero();
    for (int l = 0; l <= k; ++l) s.col(j) += std::conj(h[k - l]) * m.col(j + l);
  }
  return s;
}

// R(h)^H y as a length-n vector.
Eigen::VectorXcd dual_adjoint_apply(const Eigen::VectorXcd& h,
                                    const Eigen::VectorXcd& y, int n) {
  const int k = static_cast<int>(h.size()) - 1;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (int i = 0; i < n - k; ++i)
    for (int l = 0; l <= k; ++l) out[i + l] += std::conj(h[k - l]) * y[i];
  return out;
}

struct Candidate {
  double residual = std::numeric_limits<double>::infinity();
  Eigen::VectorXcd h;
};

}  // namespace

RootExtraction extract_azimuths(const Eigen::VectorXcd& h) {
  RootExtraction out;
  const double norm = h.norm();
  if (norm == 0.0 || h.size() < 2) {
    out.reduced_degree = true;
    return out;
  }
  const double tol = 1e-12 * norm;
  int lead = 0, trail = static_cast<int>(h.size()) - 1;
  while (lead < trail && std::abs(h[lead]) <= tol) ++lead;
  while (trail > lead && std::abs(h[trail]) <= tol) --trail;
  out.reduced_degree = (lead != 0 || trail != static_cast<int>(h.size()) - 1);
  const int deg = trail - lead;
  if (deg < 1 || std::abs(h[lead]) <= tol) {
    out.reduced_degree = true;
    return out;
  }

  std::vector<cplx> roots;
  if (deg == 1) {
    roots.push_back(-h[lead + 1] / h[lead]);
  } else if (deg == 2) {
    // stable quadratic: q = -(b + sgn*sqrt(disc))/2 avoids cancellation
    const cplx a = h[lead], b = h[lead + 1], c = h[lead + 2];
    const cplx disc = std::sqrt(b * b - 4.0 * a * c);
    const cplx q = (std::abs(b + disc) >= std::abs(b - disc)) ? -0.5 * (b + disc)
                                                              : -0.5 * (b - disc);
    if (std::abs(q) > 0.0) {
      roots.push_back(q / a);
      roots.push_back(c / q);
    } else {  // b = c = 0: double root at the origin handled as degenerate
      out.reduced_degree = true;
      return out;
    }
  } else {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -h[lead + deg - i] / h[lead];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(comp);
    if (eig.info() != Eigen::Success)
      throw NumericalError("extract_azimuths: companion eigensolve failed");
    for (int i = 0; i < deg; ++i) roots.push_back(eig.eigenvalues()[i]);
  }

  for (const cplx& z : roots)
    out.azimuths.push_back(wrap_to_2pi(-std::arg(z)));
  return out;
}

Eigen::MatrixXd estimate_powers(const std::vector<double>& azimuths,
                                const std::vector<SubbandMeasurement>& measurements,
                                const BaselineSet& bl, bool* condition_warning) {
  const int k = static_cast<int>(azimuths.size());
  const int j = static_cast<int>(measurements.size());
  const int p = bl.size();
  if (condition_warning) *condition_warning = false;
  Eigen::MatrixXd powers = Eigen::MatrixXd::Zero(k, j);
  if (k == 0) return powers;

  for (int i = 0; i < j; ++i) {
    const double omega = measurements[i].omega;
    if (measurements[i].a.size() != p)
      throw std::invalid_argument("estimate_powers: measurement/baseline size mismatch");
    Eigen::MatrixXcd steering(p, k);
    for (int s = 0; s < k; ++s) {
      const Eigen::Vector2d dir(std::cos(azimuths[s]), std::sin(azimuths[s]));
      for (int r = 0; r < p; ++r) {
        const double phase = -omega * dir.dot(bl.deltas[r]);
        steering(r, s) = cplx(std::cos(phase), std::sin(phase));
      }
    }
    Eigen::MatrixXd a_real(2 * p, k);
    a_real.topRows(p) = steering.real();
    a_real.bottomRows(p) = steering.imag();
    Eigen::VectorXd y(2 * p);
    y.head(p) = measurements[i].a.real();
    y.tail(p) = measurements[i].a.imag();
    powers.col(i) = nnls(a_real, y);

    if (condition_warning && k >= 2 && !*condition_warning) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a_real);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) < 1e-8 * sv(0)) *condition_warning = true;
    }
  }
  return powers.cwiseMax(0.0);
}

DoaEstimate solve(const std::vector<SubbandMeasurement>& measurements,
                  const std::vector<MappingMatrix>& mappings,
                  const BaselineSet& bl, int num_sources, const SolverConfig& cfg,
                  std::uint64_t rng_seed) {
  const int num_bands = static_cast<int>(measurements.size());
  const int k = num_sources;
  if (num_bands < 1) throw std::invalid_argument("solve: need at least one band");
  if (static_cast<int>(mappings.size()) != num_bands)
    throw std::invalid_argument("solve: measurements/mappings count mismatch");
  if (k < 1) throw std::invalid_argument("solve: K must be >= 1");
  if (cfg.max_init < 1 || cfg.max_iter < 1)
    throw std::invalid_argument("solve: max_init and max_iter must be >= 1");
  if (cfg.ridge < 0 || cfg.beta_ridge < 0)
    throw std::invalid_argument("solve: ridge terms must be >= 0");

  // Per-band setup: projections, annihilation data, cached inverses.
  std::vector<BandWork> band(num_bands);
  double total_a_sq = 0.0;
  int stacked_rows = 0;
  for (int i = 0; i < num_bands; ++i) {
    BandWork& w = band[i];
    w.g = mappings[i].entries;
    w.a = measurements[i].a;
    w.n = w.g.cols();
    if (w.g.rows() != w.a.size())
      throw std::invalid_argument("solve: mapping rows != measurement length");
    if (k + 1 > w.n)
      throw std::invalid_argument("solve: filter longer than Fourier sample vector (K+1 > 2M+1)");
    Eigen::MatrixXcd gram = w.g.adjoint() * w.g;
    const double lam = cfg.beta_ridge * gram.real().trace() / w.n;
    gram.diagonal().array() += lam;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram);
    if (es.info() != Eigen::Success)
      throw NumericalError("solve: Gram eigendecomposition failed for band " +
                           std::to_string(i));
    const double d_max = es.eigenvalues().maxCoeff();
    if (!(d_max > 0.0))
      throw NumericalError("solve: zero mapping for band " + std::to_string(i));
    const double d_floor = d_max * 1e-100;  // positivity only
    Eigen::VectorXd d_inv(w.n), d_inv_sqrt(w.n);
    for (int j = 0; j < w.n; ++j) {
      const double d = std::max(es.eigenvalues()[j], d_floor);
      d_inv[j] = 1.0 / d;
      d_inv_sqrt[j] = 1.0 / std::sqrt(d);
    }
    const Eigen::MatrixXcd& u = es.eigenvectors();
    w.a_inv = u * d_inv.asDiagonal() * u.adjoint();
    w.a_inv_sqrt = u * d_inv_sqrt.asDiagonal() * u.adjoint();
    w.beta = w.a_inv * (w.g.adjoint() * w.a);
    w.base = (w.a - w.g * w.beta).squaredNorm();
    w.t_beta = toeplitz_of(w.beta, k + 1);
    total_a_sq += w.a.squaredNorm();
    stacked_rows += w.n - k;
  }

  const double eps_sq = cfg.epsilon_sq >= 0.0 ? cfg.epsilon_sq : 1e-12 * total_a_sq;

  DoaEstimate est;
  est.epsilon_sq_used = eps_sq;

  Candidate best;
  int total_iters = 0;
  int restarts_done = 0;
  std::string last_failure;
  bool any_evaluation = false;

  Rng restart_rng(mix_seed(rng_seed, 0x501EULL));

  for (int restart = 0; restart < cfg.max_init && best.residual > eps_sq; ++restart) {
    ++restarts_done;

    Eigen::VectorXcd h(k + 1);
    if (restart == 0) {
      // Prony-style start: least annihilated direction of the stacked T(beta).
      Eigen::MatrixXcd stacked(stacked_rows, k + 1);
      int row = 0;
      for (const auto& w : band) {
        stacked.middleRows(row, w.n - k) = w.t_beta;
        row += w.n - k;
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinV);
      h = svd.matrixV().col(k);
    } else {
      for (int i = 0; i <= k; ++i) h[i] = restart_rng.gaussian_complex();
      h.normalize();
    }

    try {
      // Each pass factors the bracket at the current filter once; those
      // factors evaluate the filter produced by the previous pass (sample
      // recovery + residual) and then drive the next eigen-step. The raw
      // initializer itself is never scored: it gets one weighted update
      // first, which also scrubs any junk the unweighted start picked up
      // from weakly observed orders.
      for (int iter = 0; iter <= cfg.max_iter; ++iter) {
        Eigen::MatrixXcd lambda = Eigen::MatrixXcd::Zero(k + 1, k + 1);
        double residual = 0.0;
        for (auto& w : band) {
          // bracket X = R A^{-1} R^H as R_qr^H R_qr via QR of A^{-1/2} R^H;
          // the equations' permutation comes along for free
          Eigen::MatrixXcd wh = times_dual_adjoint(w.a_inv_sqrt, h, w.n);
          Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(wh);
          Eigen::MatrixXcd r =
              qr.matrixQR().topRows(w.n - k).triangularView<Eigen::Upper>();
          // near-singular bracket (degenerate filter): redo with the ridge
          double diag_max = 0.0, diag_min = std::numeric_limits<double>::infinity();
          for (int j = 0; j < w.n - k; ++j) {
            diag_max = std::max(diag_max, std::abs(r(j, j)));
            diag_min = std::min(diag_min, std::abs(r(j, j)));
          }
          if (!(diag_min > 1e-14 * diag_max)) {
            Eigen::MatrixXcd augmented(w.n + (w.n - k), w.n - k);
            augmented.topRows(w.n) = wh;
            augmented.bottomRows(w.n - k) =
                std::sqrt(cfg.ridge) * diag_max *
                Eigen::MatrixXcd::Identity(w.n - k, w.n - k);
            qr.compute(augmented);
            r = qr.matrixQR().topRows(w.n - k).triangularView<Eigen::Upper>();
          }
          const auto perm = qr.colsPermutation();
          const auto r_lower = r.adjoint().triangularView<Eigen::Lower>();

          if (iter > 0) {
            // b = beta - A^{-1} R^H X^{-1} R beta, with R beta = T(beta) h
            Eigen::VectorXcd y = perm.transpose() * (w.t_beta * h).eval();
            y = r_lower.solve(y);
            y = r.triangularView<Eigen::Upper>().solve(y);
            y = perm * y;
            const Eigen::VectorXcd b =
                w.beta - w.a_inv * dual_adjoint_apply(h, y, w.n);
            residual += w.base + (w.g * (b - w.beta)).squaredNorm();
          }
          if (iter < cfg.max_iter) {
            // T^H X^{-1} T = Z^H Z with Z = R_qr^{-H} P^T T
            const Eigen::MatrixXcd z =
                r_lower.solve((perm.transpose() * w.t_beta).eval());
            lambda.noalias() += z.adjoint() * z;
          }
          if (!lambda.allFinite() || !std::isfinite(residual))
            throw NumericalError("solve: singular annihilation bracket despite ridge");
        }
        if (iter > 0) {
          ++total_iters;
          any_evaluation = true;
          if (residual < best.residual) {
            best.residual = residual;
            best.h = h;
          }
          if (best.residual <= eps_sq) break;
        }
        if (iter == cfg.max_iter) break;

        lambda = 0.5 * (lambda + lambda.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(lambda);
        if (eig.info() != Eigen::Success)
          throw NumericalError("solve: eigendecomposition of the filter form failed");
        h = eig.eigenvectors().col(0);
        h.normalize();
      }
    } catch (const NumericalError& e) {
      last_failure = e.what();
    }
    est.restart_best_residuals.push_back(best.residual);
  }

  if (!any_evaluation)
    throw NumericalError("solve: all restarts failed numerically (" + last_failure + ")");

  est.iterations_used = total_iters;
  est.restarts_used = restarts_done;
  est.residual = best.residual;

  RootExtraction roots = extract_azimuths(best.h);
  est.degenerate = roots.reduced_degree;
  est.azimuths = std::move(roots.azimuths);
  while (static_cast<int>(est.azimuths.size()) < k) {
    est.azimuths.push_back(0.0);  // best-effort fill for reduced-degree filters
    est.degenerate = true;
  }
  est.azimuths.resize(k);
  std::sort(est.azimuths.begin(), est.azimuths.end());

  est.powers = estimate_powers(est.azimuths, measurements, bl, &est.power_condition_warning);
  return est;
}

std::string estimate_to_json(const DoaEstimate& est) {
  nlohmann::json j;
  j["azimuths_rad"] = est.azimuths;
  std::vector<double> deg;
  for (double a : est.azimuths) deg.push_back(rad_to_deg(a));
  j["azimuths_deg"] = deg;
  auto powers = nlohmann::json::array();
  for (int r = 0; r < est.powers.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < est.powers.cols(); ++c) row.push_back(est.powers(r, c));
    powers.push_back(std::move(row));
  }
  j["powers"] = std::move(powers);
  j["residual"] = est.residual;
  j["epsilon_sq"] = est.epsilon_sq_used;
  j["iterations_used"] = est.iterations_used;
  j["restarts_used"] = est.restarts_used;
  j["degenerate"] = est.degenerate;
  j["power_condition_warning"] = est.power_condition_warning;
  j["restart_best_residuals"] = est.restart_best_residuals;
  return j.dump();
}

}  // namespace frida
