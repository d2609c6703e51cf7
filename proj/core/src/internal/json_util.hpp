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

// Build-internal helpers shared by the serialization code. Infinite values
// are written as the JSON strings "inf"/"-inf" (JSON has no number for them)
// and the same tokens are used in CSV cells.

#ifndef BAYESPRIV_INTERNAL_JSON_UTIL_HPP_
#define BAYESPRIV_INTERNAL_JSON_UTIL_HPP_

#include <cmath>
#include <sstream>
#include <string>

#include "json.hpp"

namespace bayespriv::internal {

inline nlohmann::json JsonNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline std::string CsvNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace bayespriv::internal

#endif  // BAYESPRIV_INTERNAL_JSON_UTIL_HPP_
