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

#include "pipeline.hpp"

#include <cmath>
#include <cstring>
#include <list>
#include <map>
#include <memory>
#include <mutex>

namespace frida {

namespace {

struct CacheKey {
  std::uint64_t geom_hash;
  std::uint64_t omega_bits;
  int max_order;
  auto operator<=>(const CacheKey&) const = default;
};

struct MappingCache {
  // nullptr entries record bins that failed admission for this geometry.
  std::map<CacheKey, std::shared_ptr<const MappingMatrix>> entries;
  std::list<CacheKey> order;  // FIFO eviction
  std::mutex mu;
  static constexpr std::size_t kCapacity = 48;

  std::shared_ptr<const MappingMatrix> get(const CacheKey& key, bool* found) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = entries.find(key);
    *found = it != entries.end();
    return *found ? it->second : nullptr;
  }

  void put(const CacheKey& key, std::shared_ptr<const MappingMatrix> value) {
    std::lock_guard<std::mutex> lock(mu);
    if (entries.count(key)) return;
    if (entries.size() >= kCapacity) {
      entries.erase(order.front());
      order.pop_front();
    }
    entries.emplace(key, std::move(value));
    order.push_back(key);
  }
};

MappingCache& cache() {
  static MappingCache c;
  return c;
}

std::uint64_t bits_of(double v) {
  std::uint64_t u;
  static_assert(sizeof(u) == sizeof(v));
  std::memcpy(&u, &v, sizeof(u));
  return u;
}

// Builds (or fetches) the mapping for one bin; nullptr when the bin fails
// admission: the band must carry enough observable orders for K sources
// (x = w*max||dr|| not too small), the rank cap must leave truncation slack
// past the turning point, and the mapping must pass the degeneracy check.
std::shared_ptr<const MappingMatrix> mapping_for_bin(const ArrayGeometry& geom,
                                                     const BaselineSet& bl,
                                                     double omega, int num_sources) {
  FourierTruncation trunc;
  try {
    trunc = choose_truncation(geom, omega, num_sources);
  } catch (const std::invalid_argument&) {
    return nullptr;
  }

  const double x = omega * geom.max_pair_distance() / geom.speed_of_sound();
  if (x < std::max(1.0, num_sources / 3.0)) return nullptr;
  const int slack_needed = std::max(8, static_cast<int>(std::ceil(4.0 * std::cbrt(x))));
  if (trunc.max_order - static_cast<int>(std::ceil(x)) < slack_needed) return nullptr;

  const CacheKey key{geom.hash(), bits_of(omega), trunc.max_order};
  bool found = false;
  auto cached = cache().get(key, &found);
  if (found) return cached;

  std::shared_ptr<const MappingMatrix> result;
  try {
    result = std::make_shared<const MappingMatrix>(build_mapping(bl, omega, trunc));
  } catch (const NumericalError&) {
    result = nullptr;
  }
  cache().put(key, result);
  return result;
}

}  // namespace

namespace mapping_cache {
void clear() {
  std::lock_guard<std::mutex> lock(cache().mu);
  cache().entries.clear();
  cache().order.clear();
}
std::size_t size() {
  std::lock_guard<std::mutex> lock(cache().mu);
  return cache().entries.size();
}
}  // namespace mapping_cache

std::vector<int> admit_bands(const SnapshotTensor& snap, const ArrayGeometry& geom,
                             int count, int num_sources, std::vector<int>* skipped) {
  const int max_candidates = snap.num_bins() - 2;  // no DC, no Nyquist
  if (count < 1 || count > max_candidates)
    throw std::invalid_argument("admit_bands: band count out of range");
  const auto candidates =
      select_bands(snap, max_candidates, BandPolicy::kMaxPower);  // power-sorted
  const auto bl = baselines(geom);

  std::vector<int> admitted;
  if (skipped) skipped->clear();
  for (int bin : candidates) {
    if (static_cast<int>(admitted.size()) >= count) break;
    if (mapping_for_bin(geom, bl, snap.bin_frequencies[bin], num_sources))
      admitted.push_back(bin);
    else if (skipped)
      skipped->push_back(bin);
  }
  if (static_cast<int>(admitted.size()) < count)
    throw NumericalError("admit_bands: only " + std::to_string(admitted.size()) +
                         " of " + std::to_string(count) +
                         " requested bands are usable for this geometry");
  return admitted;
}

std::vector<double> run_frida(const SnapshotTensor& snap, const ArrayGeometry& geom,
                              int num_sources, const FridaEstimatorOptions& opts,
                              std::uint64_t seed, FridaRunDetail* detail) {
  const auto bl = baselines(geom);
  std::vector<int> skipped;
  const auto bins = admit_bands(snap, geom, opts.bands, num_sources, &skipped);
  const auto vis = estimate_visibilities(snap, bins);

  std::vector<MappingMatrix> mappings;
  std::vector<std::shared_ptr<const MappingMatrix>> holders;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    auto m = mapping_for_bin(geom, bl, vis.bands[i].omega, num_sources);
    if (!m) throw NumericalError("run_frida: admitted band lost its mapping");
    holders.push_back(m);
    mappings.push_back(*m);  // solver keeps its own working copy
  }

  SolverConfig cfg = opts.solver;
  if (cfg.epsilon_sq < 0.0) {
    double total_sq = 0.0;
    std::int64_t entries = 0;
    for (const auto& band : vis.bands) {
      total_sq += band.a.squaredNorm();
      entries += band.a.size();
    }
    cfg.epsilon_sq = std::max(1e-12 * total_sq,
                              static_cast<double>(entries) * vis.bootstrap_variance);
  }

  const auto est = solve(vis.bands, mappings, bl, num_sources, cfg, seed);
  if (detail) {
    detail->bands_used = bins;
    detail->bands_skipped = std::move(skipped);
    detail->estimate = est;
  }
  return est.azimuths;
}

std::vector<double> run_music(const SnapshotTensor& snap, const ArrayGeometry& geom,
                              int num_sources, const GridEstimatorOptions& opts) {
  const auto bins = select_bands(snap, opts.bands, BandPolicy::kMaxPower);
  return music_incoherent(snap, geom, bins, num_sources, AngularGrid{opts.grid_resolution})
      .azimuths;
}

std::vector<double> run_srp_phat(const SnapshotTensor& snap, const ArrayGeometry& geom,
                                 int num_sources, const GridEstimatorOptions& opts) {
  const auto bins = select_bands(snap, opts.bands, BandPolicy::kMaxPower);
  return srp_phat(snap, geom, bins, num_sources, AngularGrid{opts.grid_resolution})
      .azimuths;
}

Estimator make_frida_estimator(const FridaEstimatorOptions& opts) {
  return {"frida", [opts](const SnapshotTensor& snap, const ArrayGeometry& geom,
                          int k, std::uint64_t seed) {
            return run_frida(snap, geom, k, opts, seed);
          }};
}

Estimator make_music_estimator(const GridEstimatorOptions& opts) {
  return {"music", [opts](const SnapshotTensor& snap, const ArrayGeometry& geom,
                          int k, std::uint64_t) {
            return run_music(snap, geom, k, opts);
          }};
}

Estimator make_srp_phat_estimator(const GridEstimatorOptions& opts) {
  return {"srp-phat", [opts](const SnapshotTensor& snap, const ArrayGeometry& geom,
                             int k, std::uint64_t) {
            return run_srp_phat(snap, geom, k, opts);
          }};
}

}  // namespace frida
