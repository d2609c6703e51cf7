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

#include "bayespriv/kernel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {
namespace {

void ValidateKernel(int num_inputs, int num_outputs,
                    const std::vector<double>& p) {
  if (num_inputs < 1 || num_outputs < 1) {
    throw ParameterError("kernel needs at least one input and one output");
  }
  if (p.size() != static_cast<size_t>(num_inputs) * num_outputs) {
    throw ParameterError("kernel matrix size does not match label counts");
  }
  for (int d = 0; d < num_inputs; ++d) {
    double sum = 0.0;
    for (int w = 0; w < num_outputs; ++w) {
      const double v = p[static_cast<size_t>(d) * num_outputs + w];
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ParameterError("K[" + std::to_string(d) + "][" +
                             std::to_string(w) + "] = " + std::to_string(v) +
                             " outside [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > StochasticKernel::kRowSumTolerance) {
      throw ParameterError("row " + std::to_string(d) + " sums to " +
                           std::to_string(sum) + ", expected 1 within 1e-12");
    }
  }
}

// 1-based line:column of a byte offset in text.
std::pair<size_t, size_t> LineColumn(std::string_view text, size_t offset) {
  size_t line = 1;
  size_t col = 1;
  for (size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Byte offset of the opening bracket of rows[row] in the raw text, or npos.
size_t RowOffset(std::string_view text, int row) {
  size_t pos = text.find("\"rows\"");
  if (pos == std::string_view::npos) return pos;
  pos = text.find('[', pos);  // outer array
  if (pos == std::string_view::npos) return pos;
  for (int i = 0; i <= row; ++i) {
    pos = text.find('[', pos + 1);
    if (pos == std::string_view::npos) return pos;
  }
  return pos;
}

[[noreturn]] void ThrowAtRow(std::string_view text, std::string_view origin,
                             int row, const std::string& what) {
  std::ostringstream msg;
  msg << origin;
  const size_t off = RowOffset(text, row);
  if (off != std::string_view::npos) {
    auto [line, col] = LineColumn(text, off);
    msg << ":" << line << ":" << col;
  }
  msg << ": " << what;
  throw FormatError(msg.str());
}

}  // namespace

StochasticKernel::StochasticKernel(int num_inputs, int num_outputs,
                                   std::vector<double> row_major)
    : num_inputs_(num_inputs),
      num_outputs_(num_outputs),
      p_(std::move(row_major)) {
  ValidateKernel(num_inputs_, num_outputs_, p_);
}

DiscreteDistribution StochasticKernel::OutputMarginal(
    const DiscreteDistribution& prior) const {
  if (prior.size() != num_inputs_) {
    throw ParameterError("prior support does not match kernel inputs");
  }
  std::vector<double> marginal(static_cast<size_t>(num_outputs_), 0.0);
  for (int d = 0; d < num_inputs_; ++d) {
    const double mass = prior[d];
    if (mass == 0.0) continue;
    const auto r = row(d);
    for (int w = 0; w < num_outputs_; ++w) {
      marginal[static_cast<size_t>(w)] += mass * r[static_cast<size_t>(w)];
    }
  }
  return DiscreteDistribution(std::move(marginal));
}

std::string StochasticKernel::DigestHex() const {
  Digest d;
  d.Add(num_inputs_).Add(num_outputs_).Add(std::span<const double>(p_));
  return d.Hex();
}

std::string StochasticKernel::ToJsonString() const {
  nlohmann::json rows = nlohmann::json::array();
  for (int d = 0; d < num_inputs_; ++d) {
    nlohmann::json r = nlohmann::json::array();
    for (int w = 0; w < num_outputs_; ++w) r.push_back((*this)(d, w));
    rows.push_back(std::move(r));
  }
  nlohmann::json doc;
  doc["inputs"] = num_inputs_;
  doc["outputs"] = num_outputs_;
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void StochasticKernel::SaveJson(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out << ToJsonString();
}

StochasticKernel StochasticKernel::ParseJson(std::string_view text,
                                             std::string_view origin) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = LineColumn(text, e.byte > 0 ? e.byte - 1 : 0);
    throw FormatError(std::string(origin) + ":" + std::to_string(line) + ":" +
                      std::to_string(col) + ": " + e.what());
  }
  for (const char* key : {"inputs", "outputs", "rows"}) {
    if (!doc.contains(key)) {
      throw FormatError(std::string(origin) + ": missing field \"" + key +
                        "\"");
    }
  }
  if (!doc["inputs"].is_number_integer() ||
      !doc["outputs"].is_number_integer()) {
    throw FormatError(std::string(origin) +
                      ": \"inputs\" and \"outputs\" must be integers");
  }
  const int n_in = doc["inputs"].get<int>();
  const int n_out = doc["outputs"].get<int>();
  if (n_in < 1 || n_out < 1) {
    throw FormatError(std::string(origin) +
                      ": \"inputs\" and \"outputs\" must be >= 1");
  }
  const auto& rows = doc["rows"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != n_in) {
    throw FormatError(std::string(origin) + ": \"rows\" must be an array of " +
                      std::to_string(n_in) + " rows");
  }
  std::vector<double> p;
  p.reserve(static_cast<size_t>(n_in) * n_out);
  for (int d = 0; d < n_in; ++d) {
    const auto& r = rows[static_cast<size_t>(d)];
    if (!r.is_array() || static_cast<int>(r.size()) != n_out) {
      ThrowAtRow(text, origin, d,
                 "row " + std::to_string(d) + " must have " +
                     std::to_string(n_out) + " entries");
    }
    double sum = 0.0;
    for (int w = 0; w < n_out; ++w) {
      const auto& cell = r[static_cast<size_t>(w)];
      if (!cell.is_number()) {
        ThrowAtRow(text, origin, d,
                   "row " + std::to_string(d) + " entry " + std::to_string(w) +
                       " is not a number");
      }
      const double v = cell.get<double>();
      if (!(v >= 0.0 && v <= 1.0)) {
        ThrowAtRow(text, origin, d,
                   "row " + std::to_string(d) + " entry " + std::to_string(w) +
                       " = " + std::to_string(v) + " outside [0, 1]");
      }
      sum += v;
      p.push_back(v);
    }
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      ThrowAtRow(text, origin, d,
                 "row " + std::to_string(d) + " sums to " +
                     std::to_string(sum) + ", expected 1 within 1e-12");
    }
  }
  return StochasticKernel(n_in, n_out, std::move(p));
}

StochasticKernel StochasticKernel::LoadJson(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseJson(buf.str(), path.string());
}

StochasticKernel MakeRandomizedResponse(int k, double flip_prob) {
  if (k < 2) throw ParameterError("randomized response needs k >= 2");
  const double max_p = static_cast<double>(k - 1) / k;
  if (!(flip_prob >= 0.0 && flip_prob <= max_p)) {
    throw ParameterError("flip_prob must lie in [0, (k-1)/k] = [0, " +
                         std::to_string(max_p) + "]");
  }
  std::vector<double> p(static_cast<size_t>(k) * k,
                        flip_prob / static_cast<double>(k - 1));
  for (int d = 0; d < k; ++d) {
    p[static_cast<size_t>(d) * k + d] = 1.0 - flip_prob;
  }
  return StochasticKernel(k, k, std::move(p));
}

StochasticKernel MakeConstantMechanism(int num_inputs, int target_output) {
  if (num_inputs < 1) throw ParameterError("need at least one input");
  if (target_output < 0 || target_output >= num_inputs) {
    throw ParameterError("target output label out of range");
  }
  std::vector<double> p(static_cast<size_t>(num_inputs) * num_inputs, 0.0);
  for (int d = 0; d < num_inputs; ++d) {
    p[static_cast<size_t>(d) * num_inputs + target_output] = 1.0;
  }
  return StochasticKernel(num_inputs, num_inputs, std::move(p));
}

StochasticKernel MakeIdentityKernel(int n) {
  if (n < 1) throw ParameterError("need at least one label");
  std::vector<double> p(static_cast<size_t>(n) * n, 0.0);
  for (int d = 0; d < n; ++d) p[static_cast<size_t>(d) * n + d] = 1.0;
  return StochasticKernel(n, n, std::move(p));
}

StochasticKernel RandomKernel(std::uint64_t seed, int num_inputs,
                              int num_outputs, double min_prob) {
  if (num_inputs < 1 || num_outputs < 1) {
    throw ParameterError("kernel needs at least one input and one output");
  }
  if (min_prob < 0.0 || min_prob * num_outputs > 1.0) {
    throw ParameterError("min_prob * num_outputs must be <= 1");
  }
  Rng rng(seed);
  std::vector<double> p(static_cast<size_t>(num_inputs) * num_outputs);
  const double free_mass = 1.0 - min_prob * num_outputs;
  for (int d = 0; d < num_inputs; ++d) {
    double sum = 0.0;
    std::vector<double> raw(static_cast<size_t>(num_outputs));
    for (double& r : raw) {
      r = rng.Uniform() + 1e-12;
      sum += r;
    }
    for (int w = 0; w < num_outputs; ++w) {
      p[static_cast<size_t>(d) * num_outputs + w] =
          min_prob + free_mass * raw[static_cast<size_t>(w)] / sum;
    }
  }
  return StochasticKernel(num_inputs, num_outputs, std::move(p));
}

int SampleOutput(const StochasticKernel& kernel, int input, Rng& rng) {
  if (input < 0 || input >= kernel.num_inputs()) {
    throw ParameterError("unknown input label " + std::to_string(input));
  }
  const double u = rng.Uniform();
  double cumulative = 0.0;
  const auto r = kernel.row(input);
  for (int w = 0; w < kernel.num_outputs(); ++w) {
    cumulative += r[static_cast<size_t>(w)];
    if (u < cumulative) return w;
  }
  return kernel.num_outputs() - 1;  // guards against rounding at u ~ 1
}

}  // namespace bayespriv
