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

#ifndef BAYESPRIV_ERROR_HPP_
#define BAYESPRIV_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace bayespriv {

// An argument violates an operation's preconditions.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A file does not match the expected on-disk schema. The message carries a
// line-precise location when one is available.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A posterior was requested for an output whose marginal mass is zero.
class UndefinedPosteriorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The inversion optimizer diverged, or a training run produced non-finite
// parameters.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A frequency estimate is degenerate (for example, all counts are zero).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace bayespriv

#endif  // BAYESPRIV_ERROR_HPP_
