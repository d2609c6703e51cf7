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

// Test-side oracles: independent brute-force implementations used to freeze
// and cross-check expected values. These deliberately avoid the library's
// computation paths.

#ifndef BAYESPRIV_TESTS_ORACLES_HPP_
#define BAYESPRIV_TESTS_ORACLES_HPP_

#include <cmath>
#include <limits>
#include <vector>

namespace bayespriv::oracles {

// Bayes rule by direct enumeration over a row-major conditional matrix.
inline std::vector<double> PosteriorByEnumeration(
    const std::vector<std::vector<double>>& kernel,
    const std::vector<double>& prior, int output) {
  double marginal = 0.0;
  for (size_t d = 0; d < prior.size(); ++d) {
    marginal += prior[d] * kernel[d][static_cast<size_t>(output)];
  }
  std::vector<double> post(prior.size());
  for (size_t d = 0; d < prior.size(); ++d) {
    post[d] = prior[d] * kernel[d][static_cast<size_t>(output)] / marginal;
  }
  return post;
}

// Worst-case column log-ratio by triple loop.
inline double LdpByBruteForce(const std::vector<std::vector<double>>& kernel) {
  double worst = 0.0;
  const size_t n_in = kernel.size();
  const size_t n_out = kernel.front().size();
  for (size_t w = 0; w < n_out; ++w) {
    for (size_t d1 = 0; d1 < n_in; ++d1) {
      for (size_t d2 = 0; d2 < n_in; ++d2) {
        const double hi = kernel[d1][w];
        const double lo = kernel[d2][w];
        if (hi == 0.0) continue;
        if (lo == 0.0) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::log(hi / lo));
      }
    }
  }
  return worst;
}

// Direct-summation divergences over equal supports.
inline double KlBySummation(const std::vector<double>& p,
                            const std::vector<double>& q) {
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

inline double JsBySummation(const std::vector<double>& p,
                            const std::vector<double>& q) {
  std::vector<double> mid(p.size());
  for (size_t i = 0; i < p.size(); ++i) mid[i] = 0.5 * (p[i] + q[i]);
  return 0.5 * (KlBySummation(p, mid) + KlBySummation(q, mid));
}

// Exact two-sided binomial tail Pr[|X/T - kappa| > eps * kappa], X ~
// Bin(T, kappa), via log-space pmf summation.
inline double ExactBinomialDeviation(int t_draws, double kappa, double eps) {
  double tail = 0.0;
  const double cutoff = eps * kappa * t_draws;
  for (int k = 0; k <= t_draws; ++k) {
    if (std::abs(static_cast<double>(k) - kappa * t_draws) <= cutoff) continue;
    const double log_pmf = std::lgamma(t_draws + 1.0) -
                           std::lgamma(k + 1.0) -
                           std::lgamma(t_draws - k + 1.0) +
                           k * std::log(kappa) +
                           (t_draws - k) * std::log1p(-kappa);
    tail += std::exp(log_pmf);
  }
  return tail;
}

}  // namespace bayespriv::oracles

#endif  // BAYESPRIV_TESTS_ORACLES_HPP_
