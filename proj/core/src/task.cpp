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

#include "bayespriv/task.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bayespriv/error.hpp"
#include "bayespriv/rng.hpp"

namespace bayespriv {
namespace {

double Norm(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x * x;
  return std::sqrt(sum);
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

}  // namespace

double Box::Diameter() const {
  double sum = 0.0;
  for (size_t i = 0; i < lo.size(); ++i) {
    const double side = hi[i] - lo[i];
    sum += side * side;
  }
  return std::sqrt(sum);
}

bool Box::Contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim()) return false;
  for (size_t i = 0; i < x.size(); ++i) {
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  }
  return true;
}

std::vector<double> Box::Project(std::vector<double> x) const {
  if (static_cast<int>(x.size()) != dim()) {
    throw ParameterError("point dimension does not match domain");
  }
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = std::clamp(x[i], lo[i], hi[i]);
  }
  return x;
}

std::vector<double> Box::Sample(Rng& rng) const {
  std::vector<double> x(lo.size());
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.Uniform(lo[i], hi[i]);
  }
  return x;
}

Box Box::Unit(int dim) {
  if (dim < 1) throw ParameterError("domain dimension must be >= 1");
  return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Box Box::Validated(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw ParameterError("domain bounds must be nonempty and equal-sized");
  }
  for (size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] >= 0.0 && hi[i] <= 1.0 && lo[i] < hi[i])) {
      throw ParameterError("domain must be a nondegenerate box inside [0,1]^" +
                           std::to_string(lo.size()));
    }
  }
  return Box{std::move(lo), std::move(hi)};
}

ReconstructionTask::ReconstructionTask(TaskFamily family,
                                       std::vector<double> theta, Box domain,
                                       std::vector<double> y_values)
    : family_(family),
      theta_(std::move(theta)),
      domain_(std::move(domain)),
      diameter_(domain_.Diameter()),
      y_values_(std::move(y_values)) {
  if (static_cast<int>(theta_.size()) != domain_.dim()) {
    throw ParameterError("theta dimension does not match domain");
  }
}

ReconstructionTask ReconstructionTask::Translation(std::vector<double> theta,
                                                   Box domain) {
  return ReconstructionTask(TaskFamily::kTranslation, std::move(theta),
                            std::move(domain), {});
}

ReconstructionTask ReconstructionTask::LinearRegression(
    std::vector<double> theta, Box domain, std::vector<double> y_values) {
  if (y_values.empty()) {
    throw ParameterError("regression task needs per-sample labels");
  }
  return ReconstructionTask(TaskFamily::kLinearRegression, std::move(theta),
                            std::move(domain), std::move(y_values));
}

std::vector<double> ReconstructionTask::Gradient(std::span<const double> x,
                                                 int sample) const {
  if (static_cast<int>(x.size()) != data_dim()) {
    throw ParameterError("data dimension does not match task");
  }
  std::vector<double> g(x.size());
  if (family_ == TaskFamily::kTranslation) {
    for (size_t i = 0; i < x.size(); ++i) g[i] = theta_[i] - x[i];
    return g;
  }
  if (sample < 0 || sample >= static_cast<int>(y_values_.size())) {
    throw ParameterError("sample index out of range");
  }
  const double residual = Dot(theta_, x) - y_values_[static_cast<size_t>(sample)];
  for (size_t i = 0; i < x.size(); ++i) g[i] = residual * x[i];
  return g;
}

std::vector<double> ReconstructionTask::JacobianTransposeProduct(
    std::span<const double> x, int sample,
    std::span<const double> residual) const {
  std::vector<double> out(x.size());
  if (family_ == TaskFamily::kTranslation) {
    for (size_t i = 0; i < x.size(); ++i) out[i] = -residual[i];
    return out;
  }
  const double r =
      Dot(theta_, x) - y_values_[static_cast<size_t>(sample)];
  const double xu = Dot(x, residual);
  for (size_t i = 0; i < x.size(); ++i) {
    out[i] = theta_[i] * xu + r * residual[i];
  }
  return out;
}

double ReconstructionTask::Output(std::span<const double> x,
                                  int sample) const {
  if (family_ == TaskFamily::kTranslation) {
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
      const double diff = theta_[i] - x[i];
      sum += diff * diff;
    }
    return 0.5 * sum;
  }
  (void)sample;
  return Dot(theta_, x);
}

double ReconstructionTask::LipschitzBound() const {
  if (family_ == TaskFamily::kTranslation) return 1.0;
  // ||J(x)|| <= ||x|| ||theta|| + |theta . x - y| over the box.
  double corner_norm_sq = 0.0;
  for (int i = 0; i < domain_.dim(); ++i) {
    const double extreme = std::max(std::abs(domain_.lo[static_cast<size_t>(i)]),
                                    std::abs(domain_.hi[static_cast<size_t>(i)]));
    corner_norm_sq += extreme * extreme;
  }
  const double x_norm = std::sqrt(corner_norm_sq);
  const double theta_norm = Norm(theta_);
  double y_max = 0.0;
  for (double y : y_values_) y_max = std::max(y_max, std::abs(y));
  return 2.0 * x_norm * theta_norm + y_max;
}

bool ReconstructionTask::GradientInvertible(int sample) const {
  if (family_ == TaskFamily::kTranslation) return true;
  if (data_dim() != 1) return false;
  if (sample < 0 || sample >= static_cast<int>(y_values_.size())) return false;
  // g'(x) = 2 theta x - y must keep one sign across the domain.
  const double y = y_values_[static_cast<size_t>(sample)];
  const double at_lo = 2.0 * theta_[0] * domain_.lo[0] - y;
  const double at_hi = 2.0 * theta_[0] * domain_.hi[0] - y;
  return at_lo * at_hi > 0.0;
}

std::vector<double> ReconstructionTask::InvertGradient(
    std::span<const double> gradient, int sample) const {
  if (family_ == TaskFamily::kTranslation) {
    std::vector<double> x(gradient.size());
    for (size_t i = 0; i < x.size(); ++i) x[i] = theta_[i] - gradient[i];
    return x;
  }
  if (!GradientInvertible(sample)) {
    throw ParameterError("gradient map is not invertible for this sample");
  }
  const double y = y_values_[static_cast<size_t>(sample)];
  const double theta = theta_[0];
  const double w = gradient[0];
  const double disc = y * y + 4.0 * theta * w;
  if (disc < 0.0) {
    throw ParameterError("gradient value has no real preimage");
  }
  // Pick the root on the branch the domain lies on (sign of g').
  const double mid = 0.5 * (domain_.lo[0] + domain_.hi[0]);
  const bool increasing = 2.0 * theta * mid - y > 0.0;
  const double root = increasing ? (y + std::sqrt(disc)) / (2.0 * theta)
                                 : (y - std::sqrt(disc)) / (2.0 * theta);
  return {root};
}

BiLipschitzEstimate EstimateBiLipschitz(const ReconstructionTask& task,
                                        std::int64_t pairs,
                                        std::uint64_t seed) {
  if (task.HasExactConstants()) {
    return BiLipschitzEstimate{1.0, 1.0, 0};
  }
  if (pairs < 100) throw ParameterError("need at least 100 pairs");
  Rng rng(seed);
  const int samples = std::max<int>(
      1, static_cast<int>(task.y_values().size()));
  BiLipschitzEstimate est;
  est.c_a = std::numeric_limits<double>::infinity();
  est.c_b = 0.0;
  std::int64_t used = 0;
  for (std::int64_t i = 0; i < pairs; ++i) {
    const int m = static_cast<int>(i % samples);
    const std::vector<double> x1 = task.domain().Sample(rng);
    const std::vector<double> x2 = task.domain().Sample(rng);
    std::vector<double> diff_x(x1.size());
    for (size_t j = 0; j < x1.size(); ++j) diff_x[j] = x1[j] - x2[j];
    const double dx = Norm(diff_x);
    if (dx < 1e-12) continue;  // degenerate pair, skip
    const std::vector<double> g1 = task.Gradient(x1, m);
    const std::vector<double> g2 = task.Gradient(x2, m);
    std::vector<double> diff_g(g1.size());
    for (size_t j = 0; j < g1.size(); ++j) diff_g[j] = g1[j] - g2[j];
    const double dg = Norm(diff_g);
    if (dg < 1e-12) continue;
    const double ratio = dx / dg;
    est.c_a = std::min(est.c_a, ratio);
    est.c_b = std::max(est.c_b, ratio);
    ++used;
  }
  est.pairs = used;
  if (used == 0) throw EstimationError("no usable pairs for the estimate");
  return est;
}

}  // namespace bayespriv
