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
// Convolution as structured matrices: T(b) h and R(h) b are both the valid
// (full-overlap) part of b * h, so T(b) h == R(h) b for every b, h.

#ifndef FRIDA_ANNIHILATION_HPP_
#define FRIDA_ANNIHILATION_HPP_

#include <Eigen/Dense>

#include "common.hpp"

namespace frida {

// (len(b) - K) x (K + 1) Toeplitz matrix with row i, column l holding
// b[K + i - l], where K + 1 = filter_len. Requires len(b) >= filter_len.
Eigen::MatrixXcd toeplitz_of(const Eigen::VectorXcd& b, int filter_len);

// Right-dual of toeplitz_of: the (b_len - K) x b_len banded matrix with the
// filter reversed along each row band, satisfying R(h) b = T(b) h.
Eigen::MatrixXcd right_dual_of(const Eigen::VectorXcd& h, int b_len);

}  // namespace frida

#endif  // FRIDA_ANNIHILATION_HPP_
