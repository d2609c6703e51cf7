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

#include "bayespriv/metrics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "bayespriv/error.hpp"
#include "internal/json_util.hpp"

namespace bayespriv {
namespace {

using internal::CsvNumber;
using internal::JsonNumber;

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireSameSupport(const DiscreteDistribution& p,
                        const DiscreteDistribution& q) {
  if (p.size() != q.size()) {
    throw ParameterError("distributions live on different supports");
  }
}

}  // namespace

double KlDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q) {
  RequireSameSupport(p, q);
  double sum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return kInf;
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum < 0.0 ? 0.0 : sum;  // clamp rounding residue at identical inputs
}

double TvDistance(const DiscreteDistribution& p,
                  const DiscreteDistribution& q) {
  RequireSameSupport(p, q);
  double sum = 0.0;
  for (int i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
  return 0.5 * sum;
}

double JsDivergence(const DiscreteDistribution& p,
                    const DiscreteDistribution& q) {
  RequireSameSupport(p, q);
  double sum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    const double m = 0.5 * (p[i] + q[i]);
    if (m <= 0.0) continue;
    // p/m = 1 + (p-q)/(2m); the log1p form keeps nearly-equal inputs from
    // collapsing into the rounding of 1 +- ulp, so JS(p, p) is exactly 0 and
    // the total-probability identity holds to ~1e-16.
    const double offset = 0.5 * (p[i] - q[i]) / m;
    if (p[i] > 0.0) sum += 0.5 * p[i] * std::log1p(offset);
    if (q[i] > 0.0) sum += 0.5 * q[i] * std::log1p(-offset);
  }
  return sum < 0.0 ? 0.0 : sum;
}

DiscreteDistribution Posterior(const StochasticKernel& kernel,
                               const DiscreteDistribution& prior, int output) {
  if (prior.size() != kernel.num_inputs()) {
    throw ParameterError("prior support does not match kernel inputs");
  }
  if (output < 0 || output >= kernel.num_outputs()) {
    throw ParameterError("unknown output label " + std::to_string(output));
  }
  double marginal = 0.0;
  for (int d = 0; d < kernel.num_inputs(); ++d) {
    marginal += prior[d] * kernel(d, output);
  }
  if (marginal <= 0.0) {
    throw UndefinedPosteriorError("output " + std::to_string(output) +
                                  " has zero marginal mass under this prior");
  }
  std::vector<double> post(static_cast<size_t>(kernel.num_inputs()));
  for (int d = 0; d < kernel.num_inputs(); ++d) {
    post[static_cast<size_t>(d)] = prior[d] * kernel(d, output) / marginal;
  }
  return DiscreteDistribution(std::move(post));
}

double LdpEpsilon(const StochasticKernel& kernel) {
  double worst = 0.0;
  for (int w = 0; w < kernel.num_outputs(); ++w) {
    double lo = kInf;
    double hi = 0.0;
    for (int d = 0; d < kernel.num_inputs(); ++d) {
      const double v = kernel(d, w);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi == 0.0) continue;  // unreachable output, no constraint
    if (lo == 0.0) return kInf;
    worst = std::max(worst, std::log(hi / lo));
  }
  return worst;
}

double MbpXi(const StochasticKernel& kernel,
             const DiscreteDistribution& prior) {
  if (prior.size() != kernel.num_inputs()) {
    throw ParameterError("prior support does not match kernel inputs");
  }
  double worst = 0.0;
  for (int w = 0; w < kernel.num_outputs(); ++w) {
    double marginal = 0.0;
    for (int d = 0; d < kernel.num_inputs(); ++d) {
      marginal += prior[d] * kernel(d, w);
    }
    if (marginal <= 0.0) continue;  // unreachable output
    for (int d = 0; d < kernel.num_inputs(); ++d) {
      if (prior[d] <= 0.0 || kernel(d, w) <= 0.0) continue;
      // post(d|w)/prior(d) = K[d][w] / P_W(w)
      worst = std::max(worst, std::abs(std::log(kernel(d, w) / marginal)));
    }
  }
  return worst;
}

double MbpXiSup(const StochasticKernel& kernel) { return LdpEpsilon(kernel); }

DiscreteDistribution PosteriorMixture(
    const StochasticKernel& kernel, const DiscreteDistribution& true_prior,
    const DiscreteDistribution& attacker_prior) {
  if (true_prior.size() != kernel.num_inputs() ||
      attacker_prior.size() != kernel.num_inputs()) {
    throw ParameterError("prior support does not match kernel inputs");
  }
  const int n = kernel.num_inputs();
  std::vector<double> mixture(static_cast<size_t>(n), 0.0);
  for (int w = 0; w < kernel.num_outputs(); ++w) {
    double true_marginal = 0.0;
    double attacker_marginal = 0.0;
    for (int d = 0; d < n; ++d) {
      true_marginal += true_prior[d] * kernel(d, w);
      attacker_marginal += attacker_prior[d] * kernel(d, w);
    }
    if (true_marginal <= 0.0) continue;  // output never realized
    if (attacker_marginal <= 0.0) {
      throw UndefinedPosteriorError(
          "output " + std::to_string(w) +
          " is realized but has zero mass under the attacker prior");
    }
    for (int d = 0; d < n; ++d) {
      mixture[static_cast<size_t>(d)] += attacker_prior[d] * kernel(d, w) /
                                         attacker_marginal * true_marginal;
    }
  }
  return DiscreteDistribution(std::move(mixture));
}

double AbpEpsilon(const StochasticKernel& kernel,
                  const DiscreteDistribution& true_prior,
                  const DiscreteDistribution& attacker_prior) {
  const DiscreteDistribution mixture =
      PosteriorMixture(kernel, true_prior, attacker_prior);
  return std::sqrt(JsDivergence(mixture, attacker_prior));
}

double PriorMismatchEps(const DiscreteDistribution& true_prior,
                        const DiscreteDistribution& attacker_prior) {
  RequireSameSupport(true_prior, attacker_prior);
  double worst = 0.0;
  for (int d = 0; d < true_prior.size(); ++d) {
    if (true_prior[d] <= 0.0 || attacker_prior[d] <= 0.0) {
      throw ParameterError("both priors must be strictly positive");
    }
    worst = std::max(worst, std::abs(std::log(attacker_prior[d] /
                                              true_prior[d])));
  }
  return worst;
}

double C1(const DiscreteDistribution& f_o, const DiscreteDistribution& f_b) {
  return std::sqrt(JsDivergence(f_o, f_b));
}

double C2FromXi(double xi) {
  if (!(xi >= 0.0)) throw ParameterError("xi must be >= 0");
  return 0.5 * std::expm1(2.0 * xi);
}

double EpsTilde(double c1, double c2, double tv) { return 2.0 * c1 - c2 * tv; }

PrivacyReport ComputePrivacyReport(const StochasticKernel& kernel,
                                   const DiscreteDistribution& true_prior,
                                   const DiscreteDistribution& attacker_prior) {
  if (!true_prior.StrictlyPositive() || !attacker_prior.StrictlyPositive()) {
    throw ParameterError("report requires strictly positive priors");
  }
  PrivacyReport report;
  report.eps_ldp = LdpEpsilon(kernel);
  report.xi_mbp = MbpXi(kernel, true_prior);
  report.xi_mbp_sup = MbpXiSup(kernel);
  report.eps_abp = AbpEpsilon(kernel, true_prior, attacker_prior);
  report.prior_mismatch_eps = PriorMismatchEps(true_prior, attacker_prior);

  // Unprotected release: identity on the input space.
  const StochasticKernel identity = MakeIdentityKernel(kernel.num_inputs());
  const DiscreteDistribution f_o =
      PosteriorMixture(identity, true_prior, attacker_prior);
  report.c1 = C1(f_o, attacker_prior);
  report.c2 = C2FromXi(report.xi_mbp);

  if (kernel.num_inputs() == kernel.num_outputs()) {
    report.tv_defined = true;
    report.tv =
        TvDistance(identity.OutputMarginal(true_prior),
                   kernel.OutputMarginal(true_prior));
  }
  report.eps_tilde = EpsTilde(report.c1, report.c2, report.tv);

  report.kernel_digest = kernel.DigestHex();
  report.true_prior_digest = true_prior.DigestHex();
  report.attacker_prior_digest = attacker_prior.DigestHex();
  return report;
}

std::string PrivacyReport::ToJsonString() const {
  nlohmann::json doc;
  doc["eps_ldp"] = JsonNumber(eps_ldp);
  doc["xi_mbp"] = JsonNumber(xi_mbp);
  doc["xi_mbp_sup"] = JsonNumber(xi_mbp_sup);
  doc["eps_abp"] = JsonNumber(eps_abp);
  doc["prior_mismatch_eps"] = JsonNumber(prior_mismatch_eps);
  doc["c1"] = JsonNumber(c1);
  doc["c2"] = JsonNumber(c2);
  doc["tv"] = JsonNumber(tv);
  doc["tv_defined"] = tv_defined;
  doc["eps_tilde"] = JsonNumber(eps_tilde);
  doc["kernel_digest"] = kernel_digest;
  doc["true_prior_digest"] = true_prior_digest;
  doc["attacker_prior_digest"] = attacker_prior_digest;
  return doc.dump();
}

std::string PrivacyReport::CsvHeader() {
  return "kernel_digest,true_prior_digest,attacker_prior_digest,eps_ldp,"
         "xi_mbp,xi_mbp_sup,eps_abp,prior_mismatch_eps,c1,c2,tv,tv_defined,"
         "eps_tilde";
}

std::string PrivacyReport::ToCsvRow() const {
  std::ostringstream out;
  out << kernel_digest << ',' << true_prior_digest << ','
      << attacker_prior_digest << ',' << CsvNumber(eps_ldp) << ','
      << CsvNumber(xi_mbp) << ',' << CsvNumber(xi_mbp_sup) << ','
      << CsvNumber(eps_abp) << ',' << CsvNumber(prior_mismatch_eps) << ','
      << CsvNumber(c1) << ',' << CsvNumber(c2) << ',' << CsvNumber(tv) << ','
      << (tv_defined ? 1 : 0) << ',' << CsvNumber(eps_tilde);
  return out.str();
}

}  // namespace bayespriv
