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

#include "bessel.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace frida {

namespace {

std::atomic<double> g_fault{0.0};

void check_arg(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("bessel_j: non-finite argument");
  if (x < 0.0) throw std::invalid_argument("bessel_j: negative argument");
}

// Ascending series: J_m(x) = sum_k (-1)^k (x/2)^{m+2k} / (k! (m+k)!).
// Leading term through lgamma so huge m / tiny x underflow gracefully.
double series_jm(int m, double x) {
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  const double lt0 = m * std::log(0.5 * x) - std::lgamma(m + 1.0);
  double term = std::exp(lt0);
  if (term == 0.0) return 0.0;
  const double q = 0.25 * x * x;
  double sum = term;
  for (int k = 0; k < 400; ++k) {
    term *= -q / ((k + 1.0) * (m + k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

// Miller's algorithm: downward recurrence from a start order well past the
// turning point, normalized with J_0 + 2*sum_k J_{2k} = 1. Fills J_0..J_n.
void miller_sequence(int n, double x, std::vector<double>& out) {
  const int top = std::max(n, static_cast<int>(std::ceil(x)));
  // Seed contamination decays like exp(-c*(start-x)^{3/2}/sqrt(x)); this
  // margin measures out to ~1e-16 relative at x = 100.
  int start = top + 24 + static_cast<int>(8.0 * std::cbrt(top + 1.0));
  if (start % 2) ++start;

  double jp = 0.0;    // unnormalized J_{k+1}
  double jc = 1e-30;  // unnormalized J_k, seeded at k = start
  double norm = 0.0;
  for (int k = start; k >= 1; --k) {
    const double jm = (2.0 * k / x) * jc - jp;  // J_{k-1}
    jp = jc;
    jc = jm;
    if (std::abs(jc) > 1e250) {  // rescale to dodge overflow at tiny x
      jc *= 1e-250;
      jp *= 1e-250;
      norm *= 1e-250;
      for (int i = k; i <= n; ++i) out[i] *= 1e-250;
    }
    const int idx = k - 1;
    if (idx <= n) out[idx] = jc;
    if (idx > 0 && (idx % 2) == 0) norm += 2.0 * jc;
  }
  norm += jc;  // jc now holds unnormalized J_0
  for (int i = 0; i <= n; ++i) out[i] /= norm;
}

}  // namespace

double bessel_j(int order, double x) {
  check_arg(x);
  const int m = order < 0 ? -order : order;
  const double sign = (order < 0 && (m % 2)) ? -1.0 : 1.0;
  double v;
  if (x == 0.0) {
    v = (m == 0) ? 1.0 : 0.0;
  } else if (x < 0.5 * m || x < 2.0) {
    v = series_jm(m, x);
  } else {
    std::vector<double> seq(m + 1);
    miller_sequence(m, x, seq);
    v = seq[m];
  }
  return sign * v + g_fault.load(std::memory_order_relaxed);
}

std::vector<double> bessel_j_sequence(int max_order, double x) {
  check_arg(x);
  if (max_order < 0) throw std::invalid_argument("bessel_j_sequence: negative max order");
  std::vector<double> seq(max_order + 1);
  if (x == 0.0) {
    seq[0] = 1.0;
  } else if (x < 1e-3) {
    for (int m = 0; m <= max_order; ++m) seq[m] = series_jm(m, x);
  } else {
    miller_sequence(max_order, x, seq);
    // Far above the turning point the recurrence tail underflows relative
    // to the normalization; the series is exact there and costs nothing.
    for (int m = max_order; m >= 0 && m > 2.0 * x; --m) seq[m] = series_jm(m, x);
  }
  const double fault = g_fault.load(std::memory_order_relaxed);
  if (fault != 0.0)
    for (auto& v : seq) v += fault;
  return seq;
}

namespace testing {
void set_bessel_fault(double offset) { g_fault.store(offset, std::memory_order_relaxed); }
double bessel_fault() { return g_fault.load(std::memory_order_relaxed); }
}  // namespace testing

}  // namespace frida
