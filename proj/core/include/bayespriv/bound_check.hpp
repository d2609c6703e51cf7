// Copyright 2026 The BayesPriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BAYESPRIV_BOUND_CHECK_HPP_
#define BAYESPRIV_BOUND_CHECK_HPP_

#include <string>

namespace bayespriv {

// Verdict for one inequality lhs <= rhs + tol. An infinite rhs passes any
// lhs. `asserted` is false for checks that are computed and reported but do
// not gate a run (for example, outside a theorem's precondition range);
// `note` carries flags such as vacuous passes.
struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double tol = 0.0;
  bool holds = false;
  bool asserted = true;
  std::string note;
  std::string instance_digest;

  static BoundCheck Make(std::string name, double lhs, double rhs, double tol,
                         std::string instance_digest, bool asserted = true,
                         std::string note = "");

  // rhs - lhs; +infinity when rhs is infinite.
  double slack() const;
  std::string ToJsonLine() const;
};

}  // namespace bayespriv

#endif  // BAYESPRIV_BOUND_CHECK_HPP_
