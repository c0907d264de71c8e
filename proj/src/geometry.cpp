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

#include "geometry.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace frida {

namespace {

std::uint64_t hash_bytes(const void* data, std::size_t n, std::uint64_t seed) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed ^ 1469598103934665603ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<Eigen::Vector2d> positions,
                             double speed_of_sound)
    : positions_(std::move(positions)), speed_of_sound_(speed_of_sound) {
  const int q = static_cast<int>(positions_.size());
  if (q < 2) throw std::invalid_argument("geometry: need at least 2 microphones");
  if (!(speed_of_sound_ > 0.0) || !std::isfinite(speed_of_sound_))
    throw std::invalid_argument("geometry: speed_of_sound must be positive and finite");
  for (const auto& p : positions_) {
    if (!p.allFinite())
      throw std::invalid_argument("geometry: non-finite microphone coordinate");
  }
  max_pair_distance_ = 0.0;
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      const double d = (positions_[i] - positions_[j]).norm();
      if (d <= 1e-9)
        throw std::invalid_argument("geometry: coincident microphones at indices " +
                                    std::to_string(i) + ", " + std::to_string(j));
      max_pair_distance_ = std::max(max_pair_distance_, d);
    }
  }
  std::uint64_t h = hash_bytes(&speed_of_sound_, sizeof(double), 0);
  for (const auto& p : positions_) {
    double xy[2] = {p.x(), p.y()};
    h = hash_bytes(xy, sizeof(xy), h);
  }
  hash_ = h;
}

ArrayGeometry ArrayGeometry::subset(const std::vector<int>& indices) const {
  std::vector<Eigen::Vector2d> sel;
  sel.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= num_mics())
      throw std::invalid_argument("geometry subset: index out of range");
    sel.push_back(positions_[i]);
  }
  return ArrayGeometry(std::move(sel), speed_of_sound_);
}

std::vector<std::pair<int, int>> ordered_pairs(int num_mics) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(num_mics) * (num_mics - 1));
  for (int q = 0; q < num_mics; ++q)
    for (int qp = 0; qp < num_mics; ++qp)
      if (q != qp) pairs.emplace_back(q, qp);
  return pairs;
}

BaselineSet baselines(const ArrayGeometry& geom) {
  BaselineSet out;
  out.pairs = ordered_pairs(geom.num_mics());
  out.deltas.reserve(out.pairs.size());
  const double c = geom.speed_of_sound();
  for (const auto& [q, qp] : out.pairs)
    out.deltas.push_back((geom.position(q) - geom.position(qp)) / c);
  return out;
}

double BaselineSet::max_norm() const {
  double m = 0.0;
  for (const auto& d : deltas) m = std::max(m, d.norm());
  return m;
}

ArrayGeometry build_triangular_array(double edge_length_m, int mics_per_edge,
                                     double speed_of_sound) {
  if (!(edge_length_m > 0.0) || !std::isfinite(edge_length_m))
    throw std::invalid_argument("triangular array: edge length must be positive");
  if (mics_per_edge < 2)
    throw std::invalid_argument("triangular array: need at least 2 mics per edge");

  // circumradius of an equilateral triangle with the given edge
  const double r = edge_length_m / std::sqrt(3.0);
  const Eigen::Vector2d v0(0.0, r);
  const Eigen::Vector2d v1(r * std::cos(7.0 * kPi / 6.0), r * std::sin(7.0 * kPi / 6.0));
  const Eigen::Vector2d v2(r * std::cos(-kPi / 6.0), r * std::sin(-kPi / 6.0));
  const Eigen::Vector2d verts[4] = {v0, v1, v2, v0};

  std::vector<Eigen::Vector2d> mics;
  mics.reserve(3 * static_cast<std::size_t>(mics_per_edge));
  for (int e = 0; e < 3; ++e) {
    const Eigen::Vector2d a = verts[e];
    const Eigen::Vector2d b = verts[e + 1];
    for (int i = 0; i < mics_per_edge; ++i) {
      const double t = (i + 0.5) / mics_per_edge;
      mics.push_back(a + t * (b - a));
    }
  }
  return ArrayGeometry(std::move(mics), speed_of_sound);
}

ArrayGeometry parse_geometry_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("geometry: JSON parse error: ") + e.what());
  }
  if (!j.is_object() || !j.contains("positions"))
    throw IoError("geometry: missing \"positions\" array");
  for (const auto& [key, _] : j.items()) {
    if (key != "positions" && key != "speed_of_sound")
      throw IoError("geometry: unknown key \"" + key + "\"");
  }
  std::vector<Eigen::Vector2d> pos;
  for (const auto& p : j["positions"]) {
    if (!p.is_array() || p.size() != 2)
      throw IoError("geometry: each position must be an [x, y] pair");
    pos.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  double c = j.value("speed_of_sound", kDefaultSpeedOfSound);
  try {
    return ArrayGeometry(std::move(pos), c);
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("geometry: ") + e.what());
  }
}

ArrayGeometry load_geometry_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("geometry: cannot open file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_geometry_json(ss.str());
  } catch (const IoError& e) {
    throw IoError(std::string(e.what()) + " (file: " + path + ")");
  }
}

std::string geometry_to_json(const ArrayGeometry& geom) {
  nlohmann::json j;
  j["positions"] = nlohmann::json::array();
  for (const auto& p : geom.positions())
    j["positions"].push_back({p.x(), p.y()});
  j["speed_of_sound"] = geom.speed_of_sound();
  return j.dump(2);
}

}  // namespace frida
