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

#include <doctest.h>

#include "annihilation.hpp"
#include "rng.hpp"
#include "testutil.hpp"

using namespace frida;

TEST_CASE("toeplitz_of: constant vector example") {
  Eigen::VectorXcd b(3);
  b << 1.0, 1.0, 1.0;
  const auto t = toeplitz_of(b, 2);
  REQUIRE(t.rows() == 2);
  REQUIRE(t.cols() == 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(t(i, j) == cplx(1.0, 0.0));
}

TEST_CASE("toeplitz_of: annihilation witness for a single sinusoid") {
  const int m = 9;
  const double phi = 0.731;
  Eigen::VectorXcd b(2 * m + 1);
  for (int i = -m; i <= m; ++i) b[i + m] = std::polar(1.0, -i * phi);
  Eigen::VectorXcd h(2);
  h << 1.0, -std::polar(1.0, -phi);
  h /= h.norm();
  CHECK((toeplitz_of(b, 2) * h).norm() < 1e-14);
}

TEST_CASE("right_dual_of: identity band drops leading entries") {
  Eigen::VectorXcd h(2);
  h << 1.0, 0.0;
  Eigen::VectorXcd b(5);
  b << 1.0, 2.0, 3.0, 4.0, 5.0;
  const Eigen::VectorXcd rb = right_dual_of(h, 5) * b;
  REQUIRE(rb.size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(rb[i] == b[i + 1]);
}

TEST_CASE("right_dual_of: zero filter gives the zero matrix") {
  Eigen::VectorXcd h = Eigen::VectorXcd::Zero(3);
  CHECK(right_dual_of(h, 9).norm() == 0.0);
}

TEST_CASE("T(b) h == R(h) b == valid convolution, 100 random pairs") {
  Rng rng(0x70E111ULL);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 2 + static_cast<int>(rng.uniform(0, 9));
    const int k = 1 + static_cast<int>(rng.uniform(0, std::min(2 * m, 5)));
    Eigen::VectorXcd b(2 * m + 1), h(k + 1);
    for (int i = 0; i < b.size(); ++i) b[i] = rng.gaussian_complex();
    for (int i = 0; i < h.size(); ++i) h[i] = rng.gaussian_complex();

    const Eigen::VectorXcd th = toeplitz_of(b, k + 1) * h;
    const Eigen::VectorXcd rb = right_dual_of(h, 2 * m + 1) * b;
    const Eigen::VectorXcd conv = testutil::conv_valid(b, h);
    CHECK((th - rb).norm() < 1e-12 * (1.0 + th.norm()));
    CHECK((th - conv).norm() < 1e-12 * (1.0 + th.norm()));
  }
}

TEST_CASE("dimension preconditions") {
  Eigen::VectorXcd b(3);
  b.setOnes();
  CHECK_THROWS_AS((void)toeplitz_of(b, 4), std::invalid_argument);
  CHECK_THROWS_AS((void)toeplitz_of(b, 0), std::invalid_argument);
  Eigen::VectorXcd h(4);
  h.setOnes();
  CHECK_THROWS_AS((void)right_dual_of(h, 3), std::invalid_argument);
}
