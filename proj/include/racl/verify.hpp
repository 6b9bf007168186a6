// Copyright 2026 RACL Authors
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

#ifndef RACL_VERIFY_HPP
#define RACL_VERIFY_HPP

#include <string>
#include <vector>

#include "racl/config.hpp"

namespace racl {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  int gradient_batches = 20;
  int eer_trials = 1000;
  // Test hook: perturbs one analytic gradient so the suite must catch it.
  bool inject_gradient_bug = false;
};

// Runs the full invariant suite: gradient checks against central finite
// differences, EER oracle equivalence, loss identities, Griffin-Lim
// convergence, and determinism probes.
std::vector<CheckResult> run_verification(const RunConfig& cfg, const VerifyOptions& opts);

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace racl

#endif  // RACL_VERIFY_HPP
