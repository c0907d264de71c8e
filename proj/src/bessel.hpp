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

#ifndef FRIDA_BESSEL_HPP_
#define FRIDA_BESSEL_HPP_

#include <vector>

namespace frida {

// Bessel function of the first kind, integer order. Negative orders use
// J_{-m}(x) = (-1)^m J_m(x). Requires finite x >= 0; absolute error below
// 1e-12 for x <= 100, |m| <= 120.
//
// Ascending power series when x < m/2 (terms decay immediately, no
// cancellation blow-up); Miller downward recurrence with sum normalization
// otherwise (upward recurrence is unstable for m > x).
double bessel_j(int order, double x);

// J_0(x) .. J_max_order(x) in one downward pass; same accuracy contract.
std::vector<double> bessel_j_sequence(int max_order, double x);

namespace testing {
// Fault-injection hook for the self-test machinery: adds a constant offset
// to every evaluation. Zero restores normal behavior.
void set_bessel_fault(double offset);
double bessel_fault();
}  // namespace testing

}  // namespace frida

#endif  // FRIDA_BESSEL_HPP_
