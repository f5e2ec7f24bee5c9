#include "opdyn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include "opdyn/errors.hpp"

namespace opdyn {

namespace {

using clock_type = std::chrono::steady_clock;

double elapsed_ms(clock_type::time_point start) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - start)
      .count();
}

// Runs body(i) for i = 0..trials-1 on `workers` threads, worker w taking the
// indices congruent to w. Outcomes must be written into per-index slots so
// results cannot depend on the schedule. The first exception wins and is
// rethrown on the caller thread.
template <typename Fn>
void for_each_trial(int trials, int workers, Fn&& body) {
  const int w = std::max(1, std::min(workers, trials));
  if (w == 1) {
    for (int i = 0; i < trials; ++i) body(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int wk = 0; wk < w; ++wk) {
    pool.emplace_back([&, wk]() {
      try {
        for (int i = wk; i < trials; i += w) {
          {
            std::lock_guard<std::mutex> lock(mu);
            if (first_error) return;
          }
          body(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

// Sum of degrees; the potential for a unit-weight graph lives in
// [0, degree_sum] and increases through integers, which bounds the time to
// periodicity. The +8 keeps tiny graphs comfortable.
int periodicity_horizon(const Graph& g) {
  std::int64_t degree_sum = 0;
  for (const auto& e : g.edges()) degree_sum += e.u == e.v ? 1 : 2;
  const std::int64_t cap = g.weighted()
                               ? 10 * static_cast<std::int64_t>(g.vertex_count())
                               : 2 * degree_sum + 8;
  return static_cast<int>(std::min<std::int64_t>(cap, 1 << 28));
}

// Runs one trial of `rule` from s0, re-perturbing the weights and retrying
// up to three times if an exact plurality tie surfaces.
TrajectoryRecord run_with_tie_retry(const Graph& g, const InteractionRule& rule,
                                    const OpinionState& s0,
                                    const RunOptions& opt,
                                    std::uint64_t retry_seed) {
  if (rule.kind != InteractionRule::Kind::weighted_plurality)
    return run(g, rule, s0, opt);
  for (int attempt = 0;; ++attempt) {
    try {
      if (attempt == 0) return run(g, rule, s0, opt);
      const double eps =
          1.0 / (static_cast<double>(g.vertex_count()) *
                 static_cast<double>(g.vertex_count()) * g.vertex_count());
      const Graph jittered =
          perturb_weights(g, eps, mix64(retry_seed ^ (0xA77E + attempt)));
      return run(jittered, rule, s0, opt);
    } catch (const tie_error&) {
      if (attempt >= 3) throw;
    }
  }
}

nlohmann::json certificate_json(const SpectralCertificate& cert) {
  return {{"d", cert.d},
          {"lambda", cert.lambda},
          {"ratio", cert.ratio()},
          {"tol", cert.tol}};
}

}  // namespace

void ExperimentConfig::validate() const {
  if (q < 2) throw std::invalid_argument("need q >= 2");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must lie in [0, 1]");
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (workers < 1) throw std::invalid_argument("need at least one worker");
  if (rounds < -1) throw std::invalid_argument("rounds must be >= 0 (or -1 for auto)");
  if (rule.kind == InteractionRule::Kind::majority && q != 2)
    throw std::invalid_argument("majority needs q = 2");
}

double bernoulli_half_width(double p_hat, long long trials) {
  if (trials < 1) return 0.0;
  return 1.96 * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) /
                          static_cast<double>(trials));
}

double ExperimentResult::convergence_time_mean() const {
  if (convergence_time.empty()) return 0.0;
  double s = 0.0;
  for (int t : convergence_time) s += t;
  return s / static_cast<double>(convergence_time.size());
}

int ExperimentResult::convergence_time_max() const {
  if (convergence_time.empty()) return 0;
  return *std::max_element(convergence_time.begin(), convergence_time.end());
}

nlohmann::json ExperimentResult::to_json(const nlohmann::json& config_echo) const {
  nlohmann::json j{{"config_echo", config_echo},
                   {"estimate", estimate},
                   {"half_width", half_width},
                   {"trials", trials},
                   {"trigger_violations", trigger_violations},
                   {"convergence_time_mean", convergence_time_mean()},
                   {"convergence_time_max", convergence_time_max()},
                   {"wall_ms", wall_ms}};
  for (auto it = details.begin(); it != details.end(); ++it) j[it.key()] = it.value();
  return j;
}

ExperimentResult estimate_efficiency(const Graph& g,
                                     const ExperimentConfig& cfg) {
  const auto start = clock_type::now();
  cfg.validate();
  const int n = g.vertex_count();
  const int rounds = cfg.rounds >= 0 ? cfg.rounds : 10 * n;
  const InitialDistribution dist =
      InitialDistribution::canonical_bias(cfg.q, cfg.delta);
  const InteractionRule rule = cfg.rule;
  // t_max equals the election time: a run either converges earlier (the
  // record extrapolates through its cycle) or reaches `rounds` exactly.
  const int t_max = rounds;

  ExperimentResult res;
  res.trials = cfg.trials;
  res.q = cfg.q;
  res.convergence_time.assign(cfg.trials, 0);
  res.final_tallies.assign(static_cast<std::size_t>(cfg.trials) * cfg.q, 0);
  std::vector<char> won(cfg.trials, 0);

  for_each_trial(cfg.trials, cfg.workers, [&](int i) {
    Rng rng = trial_stream(cfg.seed, i);
    const OpinionState s0 = sample_initial(n, dist, rng);
    RunOptions opt;
    opt.t_max = t_max;
    const TrajectoryRecord rec =
        run_with_tie_retry(g, rule, s0, opt, mix64(cfg.seed ^ (i * 2 + 1)));

    const auto tallies = rec.counts_at(rounds);
    const OpinionState& final_state = rec.state_at(rounds);
    const Opinion winner = cfg.election.elect(final_state.opinions);
    won[i] = winner == 0;
    res.convergence_time[i] = rec.converged() ? rec.entry_time : rec.t_end();
    for (int a = 0; a < cfg.q; ++a)
      res.final_tallies[static_cast<std::size_t>(i) * cfg.q + a] = tallies[a];
  });

  long long wins = 0;
  for (char c : won) wins += c;
  res.estimate = static_cast<double>(wins) / cfg.trials;
  res.half_width = bernoulli_half_width(res.estimate, cfg.trials);
  res.details["rounds"] = rounds;
  res.details["election"] = cfg.election.name();
  res.details["rule"] = rule.name();
  res.wall_ms = elapsed_ms(start);
  return res;
}

ExperimentResult counterexample_failure(double p, int n_cliques, int trials,
                                        std::uint64_t seed, int workers,
                                        bool condition_group_a_one) {
  const auto start = clock_type::now();
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const Graph g = tie_proof(make_counterexample(p, n_cliques));
  const int n = g.vertex_count();
  const int k = static_cast<int>(std::llround(1.0 / (1.0 - p)));
  const InitialDistribution dist = InitialDistribution::biased_binary(p);
  const InteractionRule rule = InteractionRule::majority();
  const int t_max = periodicity_horizon(g);

  std::vector<int> a_vertices;
  for (int v = 0; v < n; ++v)
    if (g.roles()[v].kind == VertexRole::group_a) a_vertices.push_back(v);

  ExperimentResult res;
  res.trials = trials;
  res.q = 2;
  res.convergence_time.assign(trials, 0);
  res.final_tallies.assign(static_cast<std::size_t>(trials) * 2, 0);
  std::vector<char> failed(trials, 0);

  for_each_trial(trials, workers, [&](int i) {
    Rng rng = trial_stream(seed, i);
    OpinionState s0 = sample_initial(n, dist, rng);
    if (condition_group_a_one)
      for (int v : a_vertices) s0.opinions[v] = 1;

    RunOptions opt;
    opt.t_max = t_max;
    const TrajectoryRecord rec = run(g, rule, s0, opt);
    if (!rec.converged())
      throw numerical_error("majority run missed its periodicity horizon");

    const Opinion w_last = elect_plurality(rec.last.opinions, 2);
    const Opinion w_prev = *rec.period == 2
                               ? elect_plurality(rec.prev.opinions, 2)
                               : w_last;
    failed[i] = w_last == 1 && w_prev == 1;
    res.convergence_time[i] = rec.entry_time;
    const auto tallies = rec.tally(rec.t_end());
    res.final_tallies[static_cast<std::size_t>(i) * 2] = tallies[0];
    res.final_tallies[static_cast<std::size_t>(i) * 2 + 1] = tallies[1];
  });

  long long failures = 0;
  for (char c : failed) failures += c;
  res.estimate = static_cast<double>(failures) / trials;
  res.half_width = bernoulli_half_width(res.estimate, trials);

  const double clique_floor = 1.0 - std::exp(-0.02 * n_cliques);
  res.details["analytic_lower_bound"] =
      condition_group_a_one ? clique_floor
                            : std::pow(1.0 - p, k) * clique_floor;
  res.details["conditioned_on_group_a"] = condition_group_a_one;
  res.details["n_vertices"] = n;
  res.details["n_cliques"] = n_cliques;
  res.details["p"] = p;
  res.wall_ms = elapsed_ms(start);
  return res;
}

double estimate_influence(const VoteFn& fn, int n,
                          const InitialDistribution& dist, int voter,
                          bool exact, long long budget, std::uint64_t seed) {
  dist.validate();
  if (n < 1 || voter < 0 || voter >= n)
    throw std::invalid_argument("voter index out of range");
  if (budget < 1) throw std::invalid_argument("budget must be positive");
  const int q = dist.q;

  auto binary_value = [&](std::span<const Opinion> x) {
    const Opinion y = fn(x);
    if (y > 1)
      throw std::invalid_argument("influence needs a 0/1-valued function");
    return static_cast<double>(y);
  };

  std::vector<Opinion> x(n, 0);
  auto conditional_variance = [&]() {
    double mu = 0.0;
    for (int a = 0; a < q; ++a) {
      x[voter] = static_cast<Opinion>(a);
      mu += dist.probs[a] * binary_value(x);
    }
    return mu - mu * mu;
  };

  if (exact) {
    double space = 1.0;
    for (int i = 0; i < n; ++i) space *= q;
    if (space > static_cast<double>(budget))
      throw std::invalid_argument("q^n exceeds the exact-mode budget");

    // odometer over every coordinate except `voter`
    double total = 0.0;
    for (;;) {
      double weight = 1.0;
      for (int i = 0; i < n; ++i)
        if (i != voter) weight *= dist.probs[x[i]];
      total += weight * conditional_variance();

      int i = 0;
      while (i < n && (i == voter || x[i] + 1 == q)) {
        if (i != voter) x[i] = 0;
        ++i;
      }
      if (i >= n) break;
      ++x[i];
    }
    return total;
  }

  Rng rng(mix64(seed ^ 0x1f1'0001ull));
  double total = 0.0;
  for (long long s = 0; s < budget; ++s) {
    for (int i = 0; i < n; ++i)
      if (i != voter) x[i] = dist.sample(rng);
    total += conditional_variance();
  }
  return total / static_cast<double>(budget);
}

nlohmann::json ExpectationBoundReport::to_json(
    const nlohmann::json& config_echo) const {
  return {{"config_echo", config_echo},
          {"trials", trials},
          {"rounds", rounds},
          {"bound", bound},
          {"per_t_means", per_t_means},
          {"per_t_se", per_t_se},
          {"trigger_violations", violations},
          {"max_excess", max_excess},
          {"wall_ms", wall_ms}};
}

ExpectationBoundReport expectation_bound_check(const Graph& g, double p,
                                               int rounds, int trials,
                                               std::uint64_t seed,
                                               int workers) {
  const auto start = clock_type::now();
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  const int n = g.vertex_count();
  const InitialDistribution dist = InitialDistribution::biased_binary(p);
  const InteractionRule rule = InteractionRule::majority();

  std::vector<std::int32_t> ones(static_cast<std::size_t>(trials) * (rounds + 1));
  for_each_trial(trials, workers, [&](int i) {
    Rng rng = trial_stream(seed, i);
    const OpinionState s0 = sample_initial(n, dist, rng);
    RunOptions opt;
    opt.t_max = rounds;
    const TrajectoryRecord rec = run(g, rule, s0, opt);
    for (int t = 0; t <= rounds; ++t)
      ones[static_cast<std::size_t>(i) * (rounds + 1) + t] =
          static_cast<std::int32_t>(rec.counts_at(t)[1]);
  });

  ExpectationBoundReport rep;
  rep.trials = trials;
  rep.rounds = rounds;
  rep.bound = (1.0 - p) * n;
  rep.per_t_means.resize(rounds + 1);
  rep.per_t_se.resize(rounds + 1);
  rep.max_excess = -1e300;
  for (int t = 0; t <= rounds; ++t) {
    double sum = 0.0;
    for (int i = 0; i < trials; ++i)
      sum += ones[static_cast<std::size_t>(i) * (rounds + 1) + t];
    const double mean = sum / trials;
    double ssq = 0.0;
    for (int i = 0; i < trials; ++i) {
      const double dev =
          ones[static_cast<std::size_t>(i) * (rounds + 1) + t] - mean;
      ssq += dev * dev;
    }
    const double se = std::sqrt(ssq / (static_cast<double>(trials) - 1.0) /
                                static_cast<double>(trials));
    rep.per_t_means[t] = mean;
    rep.per_t_se[t] = se;
    const double excess = mean - (rep.bound + 3.0 * se);
    rep.max_excess = std::max(rep.max_excess, excess);
    if (excess > 0.0) ++rep.violations;
  }
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

bool DictatorEqualityReport::all_match() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const Row& r) { return r.exact_match; });
}

nlohmann::json DictatorEqualityReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"p", r.p},
                         {"computed", r.computed},
                         {"exact_match", r.exact_match}});
  return {{"rows", rows_json}, {"all_match", all_match()}};
}

DictatorEqualityReport dictator_equality_check(std::span<const double> p_grid) {
  const ElectionSystem dictator = ElectionSystem::dictator_rule(0);
  constexpr int n = 3;

  // probe that only the dictator coordinate matters
  std::vector<Opinion> x(n, 0);
  Opinion value[2];
  for (int a = 0; a < 2; ++a) {
    Opinion seen = 0;
    bool first = true;
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) {
        x = {static_cast<Opinion>(a), static_cast<Opinion>(b),
             static_cast<Opinion>(c)};
        const Opinion y = dictator.elect(x);
        if (first) {
          seen = y;
          first = false;
        } else if (y != seen) {
          throw std::logic_error("dictator depends on a non-dictator voter");
        }
      }
    value[a] = seen;
  }

  DictatorEqualityReport rep;
  for (double p : p_grid) {
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("p must lie in [0, 1]");
    // enumerate the one relevant coordinate under (p, 1 - p)
    const double computed =
        p * (value[0] == 0 ? 1.0 : 0.0) + (1.0 - p) * (value[1] == 0 ? 1.0 : 0.0);
    rep.rows.push_back({p, computed, computed == p});
  }
  return rep;
}

nlohmann::json UnanimityReport::to_json(const nlohmann::json& config_echo) const {
  return {{"config_echo", config_echo},
          {"estimate", estimate},
          {"half_width", half_width},
          {"trials", trials},
          {"mean_unanimity_time", mean_unanimity_time},
          {"max_unanimity_time", max_unanimity_time},
          {"trigger_firings", trigger_firings},
          {"trigger_violations", trigger_violations},
          {"unstable_checks", unstable_checks},
          {"unstable_violations", unstable_violations},
          {"certificate", certificate_json(cert)},
          {"wall_ms", wall_ms}};
}

UnanimityReport unanimity_experiment(const Graph& g,
                                     const SpectralCertificate& cert,
                                     const InitialDistribution& dist,
                                     int t_max, int trials,
                                     std::uint64_t seed, int workers) {
  const auto start = clock_type::now();
  dist.validate();
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (cert.ratio() > 3.0 / 16.0)
    throw std::invalid_argument("graph is not certified: lambda/d exceeds 3/16");
  const int n = g.vertex_count();
  const int q = dist.q;

  InteractionRule rule;
  if (q == 2) {
    rule = InteractionRule::majority();
    if (!g.all_degrees_odd())
      throw std::invalid_argument("binary runs need a tie-proofed graph");
  } else {
    rule = InteractionRule::weighted_plurality();
    if (!g.weighted())
      throw std::invalid_argument("q >= 3 runs need perturbed weights");
  }

  const double alpha = 4.0 * cert.lambda / cert.d;
  const double diff_trigger = alpha * n;                          // q = 2 form
  const double count_trigger = n * (0.5 + 2.0 * cert.lambda / cert.d);
  const double unstable_bound =
      2.0 * cert.lambda * cert.lambda * n / (alpha * alpha * cert.d * cert.d);

  struct Outcome {
    char unanimous0 = 0;
    int unanimity_time = -1;
    long long firings = 0, trigger_violations = 0;
    long long unstable_checks = 0, unstable_violations = 0;
  };
  std::vector<Outcome> out(trials);

  for_each_trial(trials, workers, [&](int i) {
    Rng rng = trial_stream(seed, i);
    const OpinionState s0 = sample_initial(n, dist, rng);
    RunOptions opt;
    opt.t_max = t_max > 0 ? t_max : periodicity_horizon(g);
    const TrajectoryRecord rec =
        run_with_tie_retry(g, rule, s0, opt, mix64(seed ^ (i * 2 + 1)));

    Outcome& o = out[i];
    const int t_end = rec.t_end();

    auto ends_all = [&](int a) {
      return rec.converged() && *rec.period == 1 &&
             rec.tally(t_end)[a] == n;
    };

    if (ends_all(0)) {
      o.unanimous0 = 1;
      for (int t = 0; t <= t_end; ++t)
        if (rec.tally(t)[0] == n) {
          o.unanimity_time = t;
          break;
        }
    }

    for (int t = 0; t <= t_end; ++t) {
      const auto row = rec.tally(t);
      const bool have_next = t < t_end || rec.converged();
      for (int a = 0; a < q; ++a) {
        const bool fired_diff =
            q == 2 && a == 0 &&
            static_cast<double>(row[0] - row[1]) >= diff_trigger;
        const bool fired_count = static_cast<double>(row[a]) >= count_trigger;
        if (!fired_diff && !fired_count) continue;
        ++o.firings;
        if (!ends_all(a)) ++o.trigger_violations;
        if (have_next) {
          const auto next = rec.counts_at(t + 1);
          ++o.unstable_checks;
          if (q == 2 && a == 0) {
            if (static_cast<double>(next[1]) > unstable_bound)
              ++o.unstable_violations;
          } else if (static_cast<double>(next[a]) <
                     static_cast<double>(n) - unstable_bound) {
            ++o.unstable_violations;
          }
        }
      }
    }
  });

  UnanimityReport rep;
  rep.trials = trials;
  rep.q = q;
  rep.cert = cert;
  long long hits = 0;
  double time_sum = 0.0;
  for (const auto& o : out) {
    hits += o.unanimous0;
    rep.trigger_firings += o.firings;
    rep.trigger_violations += o.trigger_violations;
    rep.unstable_checks += o.unstable_checks;
    rep.unstable_violations += o.unstable_violations;
    if (o.unanimous0) {
      time_sum += o.unanimity_time;
      rep.max_unanimity_time = std::max(rep.max_unanimity_time, o.unanimity_time);
    }
  }
  rep.estimate = static_cast<double>(hits) / trials;
  rep.half_width = bernoulli_half_width(rep.estimate, trials);
  rep.mean_unanimity_time = hits > 0 ? time_sum / static_cast<double>(hits) : 0.0;
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

nlohmann::json ThresholdSweepReport::to_json(
    const nlohmann::json& config_echo) const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"alpha", r.alpha},
                         {"estimate", r.estimate},
                         {"half_width", r.half_width}});
  return {{"config_echo", config_echo},
          {"rows", rows_json},
          {"trials", trials},
          {"trigger_violations", 0},
          {"wall_ms", wall_ms}};
}

std::string ThresholdSweepReport::to_csv() const {
  std::string out = "alpha,estimate,half_width,trials\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", r.alpha,
                  r.estimate, r.half_width, trials);
    out += buf;
  }
  return out;
}

ThresholdSweepReport threshold_sweep(const Graph& g, double p,
                                     std::span<const double> alphas,
                                     int rounds, int trials,
                                     std::uint64_t seed, int workers) {
  const auto start = clock_type::now();
  if (alphas.empty()) throw std::invalid_argument("need at least one alpha");
  for (double a : alphas)
    if (!(a >= 0.5 && a < 1.0))
      throw std::invalid_argument("alpha must lie in [1/2, 1)");
  if (rounds < 0) throw std::invalid_argument("rounds must be nonnegative");
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const int n = g.vertex_count();
  const InitialDistribution dist = InitialDistribution::biased_binary(p);
  const InteractionRule rule = InteractionRule::majority();

  std::vector<std::int64_t> ones_at_t(trials);
  for_each_trial(trials, workers, [&](int i) {
    Rng rng = trial_stream(seed, i);
    const OpinionState s0 = sample_initial(n, dist, rng);
    RunOptions opt;
    opt.t_max = rounds;
    const TrajectoryRecord rec = run(g, rule, s0, opt);
    ones_at_t[i] = rec.counts_at(rounds)[1];
  });

  ThresholdSweepReport rep;
  rep.trials = trials;
  for (double a : alphas) {
    long long zero_wins = 0;
    for (std::int64_t ones : ones_at_t)
      if (static_cast<double>(ones) < (1.0 - a) * n) ++zero_wins;
    const double est = static_cast<double>(zero_wins) / trials;
    rep.rows.push_back({a, est, bernoulli_half_width(est, trials)});
  }
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

double cycle_limit_closed_form(double p) {
  return (2.0 * p * p - p * p * p) / (1.0 - p + p * p);
}

nlohmann::json CycleLimitReport::to_json(const nlohmann::json& config_echo) const {
  return {{"config_echo", config_echo},
          {"n", n},
          {"estimate", estimate},
          {"half_width", half_width},
          {"closed_form", closed_form},
          {"abs_error", std::abs(estimate - closed_form)},
          {"oracle_mismatches", oracle_mismatches},
          {"trials", trials},
          {"trigger_violations", oracle_mismatches},
          {"wall_ms", wall_ms}};
}

CycleLimitReport cycle_closed_form_check(int n, double p, int rounds,
                                         int trials, std::uint64_t seed,
                                         int workers, bool deep_oracle_check) {
  const auto start = clock_type::now();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("need odd n >= 3");
  if (rounds < 0 || n <= 2 * rounds)
    throw std::invalid_argument("need n > 2 * rounds");
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const Graph g = make_cycle(n, true);
  const InitialDistribution dist = InitialDistribution::biased_binary(p);
  const InteractionRule rule = InteractionRule::majority();
  const int t_max = periodicity_horizon(g);

  std::vector<char> held0(trials, 0);
  std::vector<std::int64_t> mismatches(trials, 0);

  for_each_trial(trials, workers, [&](int i) {
    Rng rng = trial_stream(seed, i);
    const OpinionState s0 = sample_initial(n, dist, rng);
    RunOptions opt;
    opt.t_max = t_max;
    opt.record_states = deep_oracle_check;
    const TrajectoryRecord rec = run(g, rule, s0, opt);
    if (!rec.converged())
      throw numerical_error("cycle run missed its periodicity horizon");

    const auto ev0 = rec.eventual_opinion(0);
    held0[i] = ev0 && *ev0 == 0;

    for (int v = 0; v < n; ++v) {
      const CycleEventual oracle = cycle_eventual_opinion(s0, v);
      const auto simulated = rec.eventual_opinion(v);
      if (!simulated || *simulated != oracle.value) {
        ++mismatches[i];
        continue;
      }
      if (deep_oracle_check) {
        for (int t = oracle.settle_time; t <= rec.t_end(); ++t)
          if (rec.states[t].opinions[v] != oracle.value) {
            ++mismatches[i];
            break;
          }
      }
    }
  });

  CycleLimitReport rep;
  rep.n = n;
  rep.trials = trials;
  long long hits = 0;
  for (char c : held0) hits += c;
  for (std::int64_t m : mismatches) rep.oracle_mismatches += m;
  rep.estimate = static_cast<double>(hits) / trials;
  rep.half_width = bernoulli_half_width(rep.estimate, trials);
  rep.closed_form = cycle_limit_closed_form(p);
  rep.wall_ms = elapsed_ms(start);
  return rep;
}

}  // namespace opdyn
