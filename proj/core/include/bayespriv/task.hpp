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

#ifndef BAYESPRIV_TASK_HPP_
#define BAYESPRIV_TASK_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace bayespriv {

class Rng;

// Axis-aligned data domain inside the unit cube.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double Diameter() const;  // largest pairwise distance, ||hi - lo||
  bool Contains(std::span<const double> x, double tol = 0.0) const;
  std::vector<double> Project(std::vector<double> x) const;
  std::vector<double> Sample(Rng& rng) const;

  static Box Unit(int dim);
  static Box Validated(std::vector<double> lo, std::vector<double> hi);
};

enum class TaskFamily { kTranslation, kLinearRegression };

// An analytic learning task whose per-sample gradient map is available in
// closed form, used as the target of gradient-matching reconstruction.
//
//  - kTranslation: loss 0.5 ||theta - x||^2, gradient theta - x. The
//    gradient map is an isometry, so the bi-Lipschitz constants are exactly
//    c_a = c_b = 1 and the Lipschitz constant is exactly 1; every attack
//    result has a closed-form oracle.
//  - kLinearRegression: per-sample loss 0.5 (theta . x - y_m)^2, gradient
//    (theta . x - y_m) x. Constants are estimated by pair sampling.
//
// The stored (c_a, c_b) convention is the one the leakage derivation uses:
//   c_a ||g(x1) - g(x2)|| <= ||x1 - x2|| <= c_b ||g(x1) - g(x2)||,
// i.e. ratios of data distance to gradient distance. For the translation
// family both conventions coincide at 1.
class ReconstructionTask {
 public:
  static ReconstructionTask Translation(std::vector<double> theta, Box domain);
  static ReconstructionTask LinearRegression(std::vector<double> theta,
                                             Box domain,
                                             std::vector<double> y_values);

  TaskFamily family() const { return family_; }
  const Box& domain() const { return domain_; }
  double diameter() const { return diameter_; }
  int data_dim() const { return domain_.dim(); }
  std::span<const double> theta() const { return theta_; }
  std::span<const double> y_values() const { return y_values_; }

  std::vector<double> Gradient(std::span<const double> x, int sample) const;
  // J(x)^T residual, where J is the Jacobian of the gradient map in x.
  std::vector<double> JacobianTransposeProduct(
      std::span<const double> x, int sample,
      std::span<const double> residual) const;
  // Scalar model output used by output-level robustness probes.
  double Output(std::span<const double> x, int sample) const;

  // Analytic upper bound on the gradient map's Lipschitz constant over the
  // domain; exactly 1 for the translation family.
  double LipschitzBound() const;

  bool GradientInvertible(int sample) const;
  // The data point whose gradient equals `gradient` (the attack target).
  // Only valid when GradientInvertible(sample) is true; the result may lie
  // outside the domain.
  std::vector<double> InvertGradient(std::span<const double> gradient,
                                     int sample) const;

  bool HasExactConstants() const { return family_ == TaskFamily::kTranslation; }

 private:
  ReconstructionTask(TaskFamily family, std::vector<double> theta, Box domain,
                     std::vector<double> y_values);

  TaskFamily family_;
  std::vector<double> theta_;
  Box domain_;
  double diameter_;
  std::vector<double> y_values_;
};

// Bi-Lipschitz constants in the data-over-gradient convention above,
// estimated from random pairs (exact {1, 1} for the translation family).
struct BiLipschitzEstimate {
  double c_a = 0.0;  // inf ||x1 - x2|| / ||g(x1) - g(x2)||, sampled
  double c_b = 0.0;  // sup of the same ratio, sampled
  std::int64_t pairs = 0;
};
BiLipschitzEstimate EstimateBiLipschitz(const ReconstructionTask& task,
                                        std::int64_t pairs,
                                        std::uint64_t seed);

}  // namespace bayespriv

#endif  // BAYESPRIV_TASK_HPP_
