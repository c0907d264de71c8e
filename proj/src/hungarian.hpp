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

#ifndef FRIDA_HUNGARIAN_HPP_
#define FRIDA_HUNGARIAN_HPP_

#include <Eigen/Dense>
#include <vector>

namespace frida {

// Minimum-cost assignment on a square cost matrix; returns column index
// assigned to each row. O(n^3) shortest augmenting path with potentials.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

}  // namespace frida

#endif  // FRIDA_HUNGARIAN_HPP_
