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

#ifndef BAYESPRIV_DIGEST_HPP_
#define BAYESPRIV_DIGEST_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace bayespriv {

// FNV-1a based content digest for instance identification in reports.
// Doubles are absorbed by bit pattern, so digests are exact and stable.
class Digest {
 public:
  Digest& Add(std::uint64_t v);
  Digest& Add(std::int64_t v) { return Add(static_cast<std::uint64_t>(v)); }
  Digest& Add(int v) { return Add(static_cast<std::uint64_t>(v)); }
  Digest& Add(double v);
  Digest& Add(std::string_view s);
  Digest& Add(std::span<const double> values);

  std::uint64_t value() const { return state_; }
  std::string Hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ull;
};

}  // namespace bayespriv

#endif  // BAYESPRIV_DIGEST_HPP_
