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

#ifndef BAYESPRIV_THEOREMS_HPP_
#define BAYESPRIV_THEOREMS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "bayespriv/bound_check.hpp"
#include "bayespriv/distribution.hpp"
#include "bayespriv/kernel.hpp"

namespace bayespriv {

inline constexpr double kBoundTol = 1e-9;
inline constexpr double kExactTol = 1e-12;

// LDP <-> MBP: per prior, (a) MbpXi(kernel, prior) <= LdpEpsilon(kernel);
// plus one check (b) LdpEpsilon(kernel) <= 2 * MbpXiSup(kernel).
std::vector<BoundCheck> VerifyLdpMbp(
    const StochasticKernel& kernel,
    const std::vector<DiscreteDistribution>& priors, double tol = kBoundTol);

// MBP -> ABP: AbpEpsilon <= sqrt((xi + eps) * (e^{xi + eps} - 1) / 2), with
// xi the fixed-prior MBP level under the true prior and eps the measured
// prior mismatch.
BoundCheck VerifyMbpAbp(const StochasticKernel& kernel,
                        const DiscreteDistribution& true_prior,
                        const DiscreteDistribution& attacker_prior,
                        double tol = kBoundTol);

// A mechanism together with the estimate it induces: releasing w is read as
// the estimate e(w) of the target statistic mu; the mechanism misses at
// accuracy alpha on input d with probability sum of K[d][w] over outputs with
// ||e(w) - mu|| > alpha.
struct PacMechanism {
  StochasticKernel kernel;
  std::vector<std::vector<double>> estimates;  // e(w), one per output label
  std::vector<double> target;                  // mu
  double alpha = 0.0;
  double beta = 0.0;  // claimed confidence parameter, echoed in reports
};

struct PacVerdict {
  BoundCheck main;        // max_d' Pr[miss | d'] <= (1 + 4 xi) * beta_star
  BoundCheck chain_e2xi;  // intermediate e^{2 xi} * beta_star step (reported)
  double beta_star = 0.0;
  double xi_sup = 0.0;
  bool vacuous = false;  // no output ever misses
  std::vector<double> failure_probs;  // per input, exact
};

// Exact enumeration of the PAC robustness theorem. Probabilities are finite
// sums; no sampling. The main verdict is asserted only when xi_sup <= 1,
// matching the proof's e^{2 xi} expansion range; otherwise it is computed
// and reported with asserted = false.
PacVerdict VerifyPacRobustness(const PacMechanism& mechanism,
                               double tol = kExactTol);

struct ConcentrationCheck {
  BoundCheck check;
  double empirical = 0.0;   // simulated deviation frequency
  double bound = 0.0;       // 2 exp(-eps^2 T kappa1 / 3)
  double sigma = 0.0;       // binomial standard error of the frequency
  std::int64_t trials_used = 0;
  bool reran = false;  // statistical retry with 10x trials was needed
};

// Monte Carlo check of the multiplicative concentration bound for the
// frequency estimator kappa1_hat = (1/T) sum of Bernoulli(kappa1):
//   Pr[|kappa1_hat - kappa1| > eps * kappa1] <= 2 exp(-eps^2 T kappa1 / 3).
// The right side carries a 3 sigma statistical slack; a failing check is
// rerun once with 10x trials before a failure is reported.
ConcentrationCheck VerifyKappa1Concentration(double kappa1, int t_draws,
                                             double eps, std::int64_t trials,
                                             std::uint64_t seed);

struct C1ErrorCheck {
  BoundCheck check;
  double c1_exact = 0.0;
  double worst_abs_error = 0.0;  // max |C1_hat - C1| over the corner grid
  std::uint64_t corners = 0;
};

// Estimation-error theorem for C1. The perturbation class is the pointwise
// band kappa1_hat(d) in [(1-eps) kappa1(d), (1+eps) kappa1(d)], searched at
// its coordinate-extreme corners. Perturbed vectors are NOT renormalized:
// the hypothesis is pointwise, and renormalizing would shrink the class. The
// JS integrand is evaluated on the raw (possibly sub-stochastic) vector.
C1ErrorCheck VerifyC1Error(const DiscreteDistribution& kappa1,
                           const DiscreteDistribution& kappa2, double eps,
                           double tol = kBoundTol);

// Closed-form right side of the C1 estimation-error theorem.
double C1ErrorBound(double eps);

struct PrivacyEstimationInstance {
  DiscreteDistribution kappa1;
  DiscreteDistribution kappa2;
  double eps = 0.0;
};

struct PrivacyEstimationReport {
  std::int64_t instances = 0;
  bool factor2_all_hold = false;   // |eps_hat - eps_tilde| <= 2 B(eps), asserted
  double factor32_pass_rate = 0.0;  // share meeting the 3/2 B(eps) bound
  double worst_deviation = 0.0;
  std::vector<BoundCheck> factor2_checks;
};

// Error transfer from C1 to the assembled leakage bound
// eps_hat = 2 C1_hat - C2 TV, with C2 and TV treated as exactly known:
// |eps_hat - eps_tilde| = 2 |C1_hat - C1|. The factor-2 bound is asserted;
// the paper's 3/2 factor is evaluated per instance and reported only.
PrivacyEstimationReport VerifyPrivacyEstimationError(
    std::span<const PrivacyEstimationInstance> instances,
    double tol = kBoundTol);

}  // namespace bayespriv

#endif  // BAYESPRIV_THEOREMS_HPP_
