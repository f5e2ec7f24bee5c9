#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/spectral.hpp"
#include "opdyn/voting.hpp"

namespace opdyn {

// Default master seed for every randomized operation, overridable per
// invocation and (in the CLI) by the OPDYN_SEED environment variable.
inline constexpr std::uint64_t kDefaultSeed = 0xD1CE;

struct ExperimentConfig {
  InteractionRule rule = InteractionRule::majority();
  ElectionSystem election = ElectionSystem::plurality_rule(2);
  int q = 2;
  double delta = 0.0;  // initial bias toward 0, in [0, 1]
  int rounds = -1;     // election time T; -1 lets the operation pick
  int trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  int workers = 1;

  void validate() const;
};

// Monte Carlo outcome. `estimate` is the event frequency the operation
// measures and `half_width` the normal-approximation 95% half-width.
// Op-specific numbers live in `details` and are merged into the JSON.
struct ExperimentResult {
  double estimate = 0.0;
  double half_width = 0.0;
  int trials = 0;
  int q = 2;
  long long trigger_violations = 0;
  double wall_ms = 0.0;

  std::vector<int> convergence_time;        // per trial
  std::vector<std::int64_t> final_tallies;  // trials x q, flattened

  nlohmann::json details;

  double convergence_time_mean() const;
  int convergence_time_max() const;
  nlohmann::json to_json(const nlohmann::json& config_echo) const;
};

// 95% half-width for a Bernoulli frequency.
double bernoulli_half_width(double p_hat, long long trials);

// Fraction of trials in which the election run at time `rounds` (after the
// dynamics converge, earlier states extrapolate through the cycle) returns
// opinion 0, under the canonical delta-biased initial law.
ExperimentResult estimate_efficiency(const Graph& g,
                                     const ExperimentConfig& cfg);

// Failure frequency of majority dynamics plus plurality election on the
// dense-low-degree construction: a failure is a run whose absorbing cycle
// elects 1 in every cycle state, even though opinion 0 starts with
// probability p > 1/2. details carries the analytic lower bound
// (1-p)^(1/(1-p)) * (1 - exp(-0.02 * n_cliques)); with condition_group_a_one
// the group-A vertices are forced to 1 and the bound loses its (1-p)^k
// factor.
ExperimentResult counterexample_failure(double p, int n_cliques, int trials,
                                        std::uint64_t seed, int workers,
                                        bool condition_group_a_one = false);

// Influence of one voter on a 0/1-valued f: E[Var(f | X_-voter)] under the
// product law `dist`. `exact` enumerates all q^(n-1) profiles of the other
// voters (requires q^n <= budget); otherwise `budget` profiles are sampled
// and the conditional variance is still computed exactly per profile.
double estimate_influence(const VoteFn& fn, int n,
                          const InitialDistribution& dist, int voter,
                          bool exact, long long budget,
                          std::uint64_t seed = kDefaultSeed);

struct ExpectationBoundReport {
  int trials = 0;
  int rounds = 0;
  double bound = 0.0;  // (1 - p) * n
  std::vector<double> per_t_means;
  std::vector<double> per_t_se;
  long long violations = 0;  // steps with mean > bound + 3 * se
  double max_excess = 0.0;
  double wall_ms = 0.0;
  nlohmann::json to_json(const nlohmann::json& config_echo) const;
};

// Mean count of opinion-1 vertices at every t <= rounds under majority from
// the p-biased law, checked against the submartingale ceiling
// E[N_1(t)] <= (1 - p) * n at three standard errors.
ExpectationBoundReport expectation_bound_check(const Graph& g, double p,
                                               int rounds, int trials,
                                               std::uint64_t seed,
                                               int workers);

struct DictatorEqualityReport {
  struct Row {
    double p = 0.0;
    double computed = 0.0;
    bool exact_match = false;
  };
  std::vector<Row> rows;
  bool all_match() const;
  nlohmann::json to_json() const;
};

// P_p(dictator = 0) computed by enumerating the single relevant coordinate
// (after probing that the others are ignored); must equal p to the bit.
DictatorEqualityReport dictator_equality_check(std::span<const double> p_grid);

struct UnanimityReport {
  int trials = 0;
  int q = 2;
  double estimate = 0.0;  // fraction of runs ending in all-0 unanimity
  double half_width = 0.0;
  double mean_unanimity_time = 0.0;
  int max_unanimity_time = 0;
  long long trigger_firings = 0;     // steps where a consensus trigger held
  long long trigger_violations = 0;  // firings whose run missed unanimity
  long long unstable_checks = 0;     // steps where the one-step bound applied
  long long unstable_violations = 0;
  SpectralCertificate cert;
  double wall_ms = 0.0;
  nlohmann::json to_json(const nlohmann::json& config_echo) const;
};

// Runs the dynamics on a certified expander (lambda/d <= 3/16, else
// std::invalid_argument) and audits the spectral consensus conditions with
// alpha = 4*lambda/d: for q = 2, a step with N_0 - N_1 >= alpha*n must end
// in all-0 unanimity and the very next step must have
// N_1 <= 2*lambda^2*n/(alpha*d)^2 = n/8; for any q, a step with
// N_a >= n*(1/2 + 2*lambda/d) must end in all-a unanimity and the next step
// must have N_a >= n - n/8. Binary graphs must be tie-proofed, q >= 3
// graphs weighted.
UnanimityReport unanimity_experiment(const Graph& g,
                                     const SpectralCertificate& cert,
                                     const InitialDistribution& dist,
                                     int t_max, int trials,
                                     std::uint64_t seed, int workers);

struct ThresholdSweepReport {
  struct Row {
    double alpha = 0.0;
    double estimate = 0.0;  // frequency of electing 0 at time `rounds`
    double half_width = 0.0;
  };
  std::vector<Row> rows;
  int trials = 0;
  double wall_ms = 0.0;
  nlohmann::json to_json(const nlohmann::json& config_echo) const;
  std::string to_csv() const;
};

// One set of majority trials from the p-biased law, reused across the alpha
// grid (the threshold election depends only on the final tally).
ThresholdSweepReport threshold_sweep(const Graph& g, double p,
                                     std::span<const double> alphas,
                                     int rounds, int trials,
                                     std::uint64_t seed, int workers);

struct CycleLimitReport {
  int n = 0;
  int trials = 0;
  double estimate = 0.0;  // frequency of vertex 0 eventually holding 0
  double half_width = 0.0;
  double closed_form = 0.0;  // (2p^2 - p^3) / (1 - p + p^2)
  long long oracle_mismatches = 0;
  double wall_ms = 0.0;
  nlohmann::json to_json(const nlohmann::json& config_echo) const;
};

// Majority on the self-looped n-cycle from the p-biased law: estimates
// P(vertex 0 eventually holds 0), compares with the closed form, and
// cross-validates cycle_eventual_opinion against the simulated limit at
// every vertex of every trial. deep_oracle_check additionally verifies
// X_v(t) = value for every t >= settle_time from recorded states. Requires
// odd n with n > 2 * rounds so the election horizon stays inside the
// information cone.
CycleLimitReport cycle_closed_form_check(int n, double p, int rounds,
                                         int trials, std::uint64_t seed,
                                         int workers,
                                         bool deep_oracle_check = false);

// Closed-form limit of the above as n -> infinity.
double cycle_limit_closed_form(double p);

}  // namespace opdyn
