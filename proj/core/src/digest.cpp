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

#include "bayespriv/digest.hpp"

#include <bit>

namespace bayespriv {
namespace {

constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

std::uint64_t AbsorbByte(std::uint64_t state, unsigned char b) {
  return (state ^ b) * kFnvPrime;
}

}  // namespace

Digest& Digest::Add(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    state_ = AbsorbByte(state_, static_cast<unsigned char>(v >> (8 * i)));
  }
  return *this;
}

Digest& Digest::Add(double v) {
  // Normalize -0.0 so semantically equal inputs digest identically.
  if (v == 0.0) v = 0.0;
  return Add(std::bit_cast<std::uint64_t>(v));
}

Digest& Digest::Add(std::string_view s) {
  for (char c : s) {
    state_ = AbsorbByte(state_, static_cast<unsigned char>(c));
  }
  state_ = AbsorbByte(state_, 0xffu);  // terminator, keeps "ab","c" != "a","bc"
  return *this;
}

Digest& Digest::Add(std::span<const double> values) {
  for (double v : values) Add(v);
  return *this;
}

std::string Digest::Hex() const {
  static const char* kHex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = kHex[(state_ >> (4 * i)) & 0xf];
  }
  return out;
}

}  // namespace bayespriv
