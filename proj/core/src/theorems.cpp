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

#include "bayespriv/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "json.hpp"

#include "bayespriv/digest.hpp"
#include "bayespriv/error.hpp"
#include "bayespriv/metrics.hpp"
#include "bayespriv/rng.hpp"
#include "internal/json_util.hpp"

namespace bayespriv {
namespace {

using internal::JsonNumber;

constexpr double kInf = std::numeric_limits<double>::infinity();

double SquaredDistance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return sum;
}

// The paper's JS integrand extended by linearity to non-normalized first
// arguments; always >= 0 since each pair term is (a+b)(ln 2 - H(a/(a+b))).
// Same log1p form as the exact JS to stay stable near equal inputs.
double JsIntegralRaw(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double m = 0.5 * (a[i] + b[i]);
    if (m <= 0.0) continue;
    const double offset = 0.5 * (a[i] - b[i]) / m;
    if (a[i] > 0.0) sum += 0.5 * a[i] * std::log1p(offset);
    if (b[i] > 0.0) sum += 0.5 * b[i] * std::log1p(-offset);
  }
  return sum < 0.0 ? 0.0 : sum;
}

double CornerSearchWorstC1Error(const DiscreteDistribution& kappa1,
                                const DiscreteDistribution& kappa2,
                                double eps, std::uint64_t* corners_out) {
  const int n = kappa1.size();
  const double c1_exact =
      std::sqrt(JsIntegralRaw(kappa1.mass(), kappa2.mass()));
  std::vector<double> perturbed(static_cast<size_t>(n));
  double worst = 0.0;
  const std::uint64_t corners = 1ull << n;
  for (std::uint64_t mask = 0; mask < corners; ++mask) {
    for (int i = 0; i < n; ++i) {
      const double factor = (mask >> i) & 1ull ? 1.0 + eps : 1.0 - eps;
      perturbed[static_cast<size_t>(i)] = factor * kappa1[i];
    }
    const double c1_hat =
        std::sqrt(JsIntegralRaw(perturbed, kappa2.mass()));
    worst = std::max(worst, std::abs(c1_hat - c1_exact));
  }
  if (corners_out != nullptr) *corners_out = corners;
  return worst;
}

}  // namespace

BoundCheck BoundCheck::Make(std::string name, double lhs, double rhs,
                            double tol, std::string instance_digest,
                            bool asserted, std::string note) {
  BoundCheck check;
  check.name = std::move(name);
  check.lhs = lhs;
  check.rhs = rhs;
  check.tol = tol;
  check.holds = !std::isnan(lhs) && !std::isnan(rhs) && lhs <= rhs + tol;
  check.asserted = asserted;
  check.note = std::move(note);
  check.instance_digest = std::move(instance_digest);
  return check;
}

double BoundCheck::slack() const {
  if (std::isinf(rhs) && rhs > 0) return kInf;
  return rhs - lhs;
}

std::string BoundCheck::ToJsonLine() const {
  nlohmann::json doc;
  doc["name"] = name;
  doc["lhs"] = JsonNumber(lhs);
  doc["rhs"] = JsonNumber(rhs);
  doc["slack"] = JsonNumber(slack());
  doc["tol"] = tol;
  doc["holds"] = holds;
  doc["asserted"] = asserted;
  doc["note"] = note;
  doc["instance_digest"] = instance_digest;
  return doc.dump();
}

std::vector<BoundCheck> VerifyLdpMbp(
    const StochasticKernel& kernel,
    const std::vector<DiscreteDistribution>& priors, double tol) {
  const double ldp = LdpEpsilon(kernel);
  const double xi_sup = MbpXiSup(kernel);
  std::vector<BoundCheck> checks;
  checks.reserve(priors.size() + 1);
  for (const auto& prior : priors) {
    if (!prior.StrictlyPositive()) {
      throw ParameterError("LDP/MBP check requires strictly positive priors");
    }
    Digest digest;
    digest.Add(kernel.DigestHex()).Add(prior.DigestHex());
    checks.push_back(BoundCheck::Make("ldp_mbp.xi_le_ldp",
                                      MbpXi(kernel, prior), ldp, tol,
                                      digest.Hex()));
  }
  Digest digest;
  digest.Add(kernel.DigestHex()).Add("sup");
  checks.push_back(BoundCheck::Make("ldp_mbp.ldp_le_2xisup", ldp, 2.0 * xi_sup,
                                    tol, digest.Hex()));
  return checks;
}

BoundCheck VerifyMbpAbp(const StochasticKernel& kernel,
                        const DiscreteDistribution& true_prior,
                        const DiscreteDistribution& attacker_prior,
                        double tol) {
  if (!true_prior.StrictlyPositive() || !attacker_prior.StrictlyPositive()) {
    throw ParameterError("MBP->ABP check requires strictly positive priors");
  }
  const double lhs = AbpEpsilon(kernel, true_prior, attacker_prior);
  const double xi = MbpXi(kernel, true_prior);
  const double eps = PriorMismatchEps(true_prior, attacker_prior);
  const double level = xi + eps;
  const double rhs = std::sqrt(0.5 * level * std::expm1(level));
  Digest digest;
  digest.Add(kernel.DigestHex())
      .Add(true_prior.DigestHex())
      .Add(attacker_prior.DigestHex());
  return BoundCheck::Make("mbp_abp", lhs, rhs, tol, digest.Hex());
}

PacVerdict VerifyPacRobustness(const PacMechanism& mechanism, double tol) {
  const StochasticKernel& kernel = mechanism.kernel;
  if (static_cast<int>(mechanism.estimates.size()) != kernel.num_outputs()) {
    throw ParameterError("estimate map must cover every output label");
  }
  for (const auto& e : mechanism.estimates) {
    if (e.size() != mechanism.target.size()) {
      throw ParameterError("estimate and target dimensions differ");
    }
  }
  if (!(mechanism.alpha >= 0.0)) throw ParameterError("alpha must be >= 0");

  const double alpha_sq = mechanism.alpha * mechanism.alpha;
  std::vector<bool> misses(static_cast<size_t>(kernel.num_outputs()));
  for (int w = 0; w < kernel.num_outputs(); ++w) {
    misses[static_cast<size_t>(w)] =
        SquaredDistance(mechanism.estimates[static_cast<size_t>(w)],
                        mechanism.target) > alpha_sq;
  }

  PacVerdict verdict;
  verdict.failure_probs.resize(static_cast<size_t>(kernel.num_inputs()));
  for (int d = 0; d < kernel.num_inputs(); ++d) {
    double prob = 0.0;
    for (int w = 0; w < kernel.num_outputs(); ++w) {
      if (misses[static_cast<size_t>(w)]) prob += kernel(d, w);
    }
    verdict.failure_probs[static_cast<size_t>(d)] = prob;
  }
  verdict.beta_star = *std::max_element(verdict.failure_probs.begin(),
                                        verdict.failure_probs.end());
  verdict.xi_sup = MbpXiSup(kernel);
  verdict.vacuous = verdict.beta_star == 0.0;

  Digest digest;
  digest.Add(kernel.DigestHex()).Add(mechanism.alpha);
  digest.Add(std::span<const double>(mechanism.target));
  for (const auto& e : mechanism.estimates) {
    digest.Add(std::span<const double>(e));
  }

  const bool in_proof_range = verdict.xi_sup <= 1.0;
  std::string note;
  if (!in_proof_range) note = "reported-only: xi_sup > 1";
  if (verdict.vacuous) {
    note = note.empty() ? "vacuous: beta_star = 0"
                        : note + "; vacuous: beta_star = 0";
  }
  const double worst = verdict.beta_star;  // max over all inputs d'
  verdict.main =
      BoundCheck::Make("pac_robustness", worst,
                       (1.0 + 4.0 * verdict.xi_sup) * verdict.beta_star, tol,
                       digest.Hex(), in_proof_range, note);
  verdict.chain_e2xi = BoundCheck::Make(
      "pac_robustness.e2xi_chain", worst,
      std::exp(2.0 * verdict.xi_sup) * verdict.beta_star, tol, digest.Hex(),
      /*asserted=*/false);
  return verdict;
}

ConcentrationCheck VerifyKappa1Concentration(double kappa1, int t_draws,
                                             double eps, std::int64_t trials,
                                             std::uint64_t seed) {
  if (!(kappa1 > 0.0 && kappa1 < 1.0)) {
    throw ParameterError("kappa1 must lie in (0, 1)");
  }
  if (t_draws < 1) throw ParameterError("T must be >= 1");
  if (!(eps >= 0.0)) throw ParameterError("eps must be >= 0");
  if (trials < 10000) throw ParameterError("need at least 1e4 trials");

  const double bound =
      2.0 * std::exp(-eps * eps * static_cast<double>(t_draws) * kappa1 / 3.0);

  auto simulate = [&](std::int64_t n_trials, std::uint64_t run_seed) {
    Rng rng(run_seed);
    const double cutoff = eps * kappa1 * static_cast<double>(t_draws);
    std::int64_t deviated = 0;
    for (std::int64_t trial = 0; trial < n_trials; ++trial) {
      int successes = 0;
      for (int i = 0; i < t_draws; ++i) {
        if (rng.Uniform() < kappa1) ++successes;
      }
      const double gap = std::abs(static_cast<double>(successes) -
                                  kappa1 * static_cast<double>(t_draws));
      if (gap > cutoff) ++deviated;
    }
    return static_cast<double>(deviated) / static_cast<double>(n_trials);
  };

  ConcentrationCheck result;
  result.bound = bound;
  std::int64_t used = trials;
  std::uint64_t run_seed = seed;
  std::string note;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const double empirical = simulate(used, run_seed);
    const double sigma =
        std::max(std::sqrt(empirical * (1.0 - empirical) /
                           static_cast<double>(used)),
                 1.0 / static_cast<double>(used));
    Digest digest;
    digest.Add(kappa1).Add(t_draws).Add(eps).Add(
        static_cast<std::uint64_t>(used));
    digest.Add(run_seed);
    result.empirical = empirical;
    result.sigma = sigma;
    result.trials_used = used;
    result.check =
        BoundCheck::Make("kappa1_concentration", empirical,
                         bound + 3.0 * sigma, 0.0, digest.Hex(), true, note);
    if (result.check.holds) break;
    // Separate sampling noise from a genuine violation: one retry, 10x size.
    used = trials * 10;
    run_seed = DeriveSeed(seed, "kappa1.rerun", 1);
    note = "reran with 10x trials";
    result.reran = true;
  }
  return result;
}

double C1ErrorBound(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw ParameterError("eps must lie in [0, 1)");
  }
  if (eps == 0.0) return 0.0;
  const double first = 0.5 * (1.0 + eps) * std::log((1.0 + eps) / (1.0 - eps));
  const double second =
      0.5 * (eps + std::max(std::log1p(eps), -std::log1p(-eps)));
  return std::sqrt(first + second);
}

C1ErrorCheck VerifyC1Error(const DiscreteDistribution& kappa1,
                           const DiscreteDistribution& kappa2, double eps,
                           double tol) {
  if (kappa1.size() != kappa2.size()) {
    throw ParameterError("kappa1 and kappa2 must share a support");
  }
  if (kappa1.size() > 20) {
    throw ParameterError("corner enumeration is limited to 20 labels");
  }
  if (!(eps >= 0.0 && eps < 1.0)) {
    throw ParameterError("eps must lie in [0, 1)");
  }
  C1ErrorCheck result;
  result.c1_exact = std::sqrt(JsIntegralRaw(kappa1.mass(), kappa2.mass()));
  result.worst_abs_error =
      CornerSearchWorstC1Error(kappa1, kappa2, eps, &result.corners);
  Digest digest;
  digest.Add(kappa1.DigestHex()).Add(kappa2.DigestHex()).Add(eps);
  result.check = BoundCheck::Make("c1_error", result.worst_abs_error,
                                  C1ErrorBound(eps), tol, digest.Hex());
  return result;
}

PrivacyEstimationReport VerifyPrivacyEstimationError(
    std::span<const PrivacyEstimationInstance> instances, double tol) {
  PrivacyEstimationReport report;
  report.instances = static_cast<std::int64_t>(instances.size());
  report.factor2_all_hold = true;
  std::int64_t factor32_pass = 0;
  for (size_t i = 0; i < instances.size(); ++i) {
    const auto& inst = instances[i];
    const C1ErrorCheck c1 = VerifyC1Error(inst.kappa1, inst.kappa2, inst.eps);
    // eps_hat - eps_tilde = 2 (C1_hat - C1); C2 and TV cancel exactly.
    const double deviation = 2.0 * c1.worst_abs_error;
    const double b = C1ErrorBound(inst.eps);
    Digest digest;
    digest.Add(inst.kappa1.DigestHex())
        .Add(inst.kappa2.DigestHex())
        .Add(inst.eps);
    BoundCheck factor2 = BoundCheck::Make("eps_estimation.factor2", deviation,
                                          2.0 * b, tol, digest.Hex());
    report.factor2_all_hold = report.factor2_all_hold && factor2.holds;
    report.worst_deviation = std::max(report.worst_deviation, deviation);
    if (deviation <= 1.5 * b + tol) ++factor32_pass;
    report.factor2_checks.push_back(std::move(factor2));
  }
  report.factor32_pass_rate =
      instances.empty() ? 1.0
                        : static_cast<double>(factor32_pass) /
                              static_cast<double>(instances.size());
  return report;
}

}  // namespace bayespriv
