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

#ifndef FRIDA_GEOMETRY_HPP_
#define FRIDA_GEOMETRY_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace frida {

// Planar microphone array. Immutable after construction; safe to share
// read-only across threads.
class ArrayGeometry {
 public:
  // Throws std::invalid_argument if fewer than two mics, any coordinate is
  // non-finite, or two mics are closer than 1e-9 m.
  ArrayGeometry(std::vector<Eigen::Vector2d> positions,
                double speed_of_sound = kDefaultSpeedOfSound);

  int num_mics() const { return static_cast<int>(positions_.size()); }
  const std::vector<Eigen::Vector2d>& positions() const { return positions_; }
  const Eigen::Vector2d& position(int q) const { return positions_[q]; }
  double speed_of_sound() const { return speed_of_sound_; }

  // Largest pairwise mic distance in meters.
  double max_pair_distance() const { return max_pair_distance_; }

  // Content hash, used as a cache key for per-geometry operators.
  std::uint64_t hash() const { return hash_; }

  // New geometry keeping only the given mic indices (order preserved).
  ArrayGeometry subset(const std::vector<int>& indices) const;

 private:
  std::vector<Eigen::Vector2d> positions_;
  double speed_of_sound_;
  double max_pair_distance_;
  std::uint64_t hash_;
};

// All ordered mic pairs (q, q') with q != q', in lexicographic order, and
// the corresponding normalized baselines (r_q - r_q')/c in seconds. The
// pair order here fixes the row order of every measurement vector and
// mapping matrix.
struct BaselineSet {
  std::vector<std::pair<int, int>> pairs;   // Q(Q-1) entries
  std::vector<Eigen::Vector2d> deltas;      // seconds

  int size() const { return static_cast<int>(pairs.size()); }
  // Largest ||delta|| in seconds.
  double max_norm() const;
};

// The canonical ordered-pair list for Q mics; depends on Q alone.
std::vector<std::pair<int, int>> ordered_pairs(int num_mics);

BaselineSet baselines(const ArrayGeometry& geom);

// Equilateral triangle centered at the origin with one vertex on the +y
// axis; each edge carries mics_per_edge mics at fractions (i + 0.5)/m of
// the edge, so vertices are not duplicated between edges.
ArrayGeometry build_triangular_array(double edge_length_m, int mics_per_edge,
                                     double speed_of_sound = kDefaultSpeedOfSound);

// Geometry from a JSON file: {"positions": [[x, y], ...],
// "speed_of_sound": 343.0}. speed_of_sound is optional.
ArrayGeometry load_geometry_file(const std::string& path);
ArrayGeometry parse_geometry_json(const std::string& json_text);
std::string geometry_to_json(const ArrayGeometry& geom);

}  // namespace frida

#endif  // FRIDA_GEOMETRY_HPP_
