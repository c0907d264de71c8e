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

#include "annihilation.hpp"

namespace frida {

Eigen::MatrixXcd toeplitz_of(const Eigen::VectorXcd& b, int filter_len) {
  const int blen = static_cast<int>(b.size());
  const int k = filter_len - 1;
  if (filter_len < 1 || blen < filter_len)
    throw std::invalid_argument("toeplitz_of: need len(b) >= filter_len >= 1");
  Eigen::MatrixXcd t(blen - k, filter_len);
  for (int i = 0; i < blen - k; ++i)
    for (int l = 0; l < filter_len; ++l) t(i, l) = b[k + i - l];
  return t;
}

Eigen::MatrixXcd right_dual_of(const Eigen::VectorXcd& h, int b_len) {
  const int filter_len = static_cast<int>(h.size());
  const int k = filter_len - 1;
  if (filter_len < 1 || b_len < filter_len)
    throw std::invalid_argument("right_dual_of: need b_len >= len(h) >= 1");
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(b_len - k, b_len);
  for (int i = 0; i < b_len - k; ++i)
    for (int l = 0; l < filter_len; ++l) r(i, i + l) = h[k - l];
  return r;
}

}  // namespace frida
