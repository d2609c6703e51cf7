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

#ifndef BAYESPRIV_METRICS_HPP_
#define BAYESPRIV_METRICS_HPP_

#include <optional>
#include <string>

#include "bayespriv/distribution.hpp"
#include "bayespriv/kernel.hpp"

namespace bayespriv {

// Exact divergences over matching finite supports. Natural logarithm
// throughout. KL is +infinity when q has a zero where p has mass.
double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q);
// Half the L1 distance; in [0, 1].
double TvDistance(const DiscreteDistribution& p,
                  const DiscreteDistribution& q);
// Jensen-Shannon divergence via the midpoint mixture; in [0, ln 2].
double JsDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q);

// Bayes posterior over inputs after observing `output`:
//   post(d) = K[d][w] * prior(d) / P_W(w).
// Throws UndefinedPosteriorError when the marginal P_W(w) is zero.
DiscreteDistribution Posterior(const StochasticKernel& kernel,
                               const DiscreteDistribution& prior, int output);

// Worst-case output log-ratio between any two inputs:
//   max over w, d, d' of ln(K[d][w] / K[d'][w]).
// +infinity when some column mixes zero and nonzero entries.
double LdpEpsilon(const StochasticKernel& kernel);

// Maximum Bayesian privacy level under a fixed prior: the largest
// |ln(post(d|w) / prior(d))| over outputs with positive marginal and inputs
// with positive prior mass. Pairs with a zero posterior are excluded (the
// ratio is zero there and the paper's two-sided bound is vacuous), which
// keeps the value finite; the all-priors worst case lives in MbpXiSup.
double MbpXi(const StochasticKernel& kernel,
             const DiscreteDistribution& prior);

// Supremum of MbpXi over all strictly positive priors. Attained in the
// point-mass limit and equal to LdpEpsilon in closed form.
double MbpXiSup(const StochasticKernel& kernel);

// The attacker's expected posterior belief F^A: per-output posteriors under
// the attacker's prior, mixed by the output distribution the true prior
// induces. With attacker_prior == true_prior this returns the true prior
// exactly (law of total probability).
DiscreteDistribution PosteriorMixture(const StochasticKernel& kernel,
                                      const DiscreteDistribution& true_prior,
                                      const DiscreteDistribution& attacker_prior);

// Average Bayesian privacy: sqrt(JS(F^A || F^B)) with F^B = attacker_prior.
double AbpEpsilon(const StochasticKernel& kernel,
                  const DiscreteDistribution& true_prior,
                  const DiscreteDistribution& attacker_prior);

// Largest |ln(attacker_prior(d) / true_prior(d))|. Both priors must be
// strictly positive.
double PriorMismatchEps(const DiscreteDistribution& true_prior,
                        const DiscreteDistribution& attacker_prior);

// Appendix constants: C1 = sqrt(JS(F^O || F^B)), C2 = (e^{2 xi} - 1) / 2,
// and the leakage upper bound eps_tilde = 2 C1 - C2 * tv.
double C1(const DiscreteDistribution& f_o, const DiscreteDistribution& f_b);
double C2FromXi(double xi);
double EpsTilde(double c1, double c2, double tv);

// All metrics for one (kernel, true prior, attacker prior) instance.
//
// F^O (the belief after observing an unprotected release) is realized as the
// posterior mixture under the identity release, which reduces to the true
// prior. The TV term compares the released-value distribution under the
// mechanism with the one under the identity release; it is only defined when
// the kernel is square (tv_defined records this).
struct PrivacyReport {
  double eps_ldp = 0.0;
  double xi_mbp = 0.0;
  double xi_mbp_sup = 0.0;
  double eps_abp = 0.0;
  double prior_mismatch_eps = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double tv = 0.0;
  bool tv_defined = false;
  double eps_tilde = 0.0;
  std::string kernel_digest;
  std::string true_prior_digest;
  std::string attacker_prior_digest;

  std::string ToJsonString() const;
  static std::string CsvHeader();
  std::string ToCsvRow() const;
};

PrivacyReport ComputePrivacyReport(const StochasticKernel& kernel,
                                   const DiscreteDistribution& true_prior,
                                   const DiscreteDistribution& attacker_prior);

}  // namespace bayespriv

#endif  // BAYESPRIV_METRICS_HPP_
