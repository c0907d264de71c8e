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

#ifndef FRIDA_SELFTEST_HPP_
#define FRIDA_SELFTEST_HPP_

#include <string>
#include <vector>

namespace frida {

struct SelfTestCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfTestReport {
  std::vector<SelfTestCheck> checks;
  bool all_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

// Quick invariant checks against closed-form oracles: exact-visibility
// forward model, annihilation identities, Bessel spot values, filter-root
// round trip, end-to-end noiseless recovery. `inject_bessel_fault` flips on
// a deliberate perturbation so the failure path itself can be exercised.
SelfTestReport run_selftest(bool inject_bessel_fault = false);

std::string selftest_to_json(const SelfTestReport& report);

}  // namespace frida

#endif  // FRIDA_SELFTEST_HPP_
