#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opdyn/dynamics.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/experiments.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/spectral.hpp"
#include "opdyn/voting.hpp"

namespace {

using nlohmann::json;
using namespace opdyn;

constexpr int kExitConfig = 2;
constexpr int kExitTie = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitViolation = 5;

// Accepts "2/3", "0.75", "1".
double parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    }
    std::size_t used_n = 0, used_d = 0;
    const std::string num = text.substr(0, slash), den = text.substr(slash + 1);
    const double a = std::stod(num, &used_n);
    const double b = std::stod(den, &used_d);
    if (used_n != num.size() || used_d != den.size() || b == 0.0)
      throw std::invalid_argument(text);
    return a / b;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + text + "'");
  }
}

std::uint64_t parse_seed(const std::string& text) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse seed '" + text + "'");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse " + what + " '" + text + "'");
  }
}

// cycle:N | complete:N | counterexample:P:NC | random-regular:N:D | file:PATH
Graph parse_graph_spec(const std::string& spec, std::uint64_t seed) {
  const auto parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "file") {
    if (parts.size() != 2 || parts[1].empty())
      throw std::invalid_argument("expected file:PATH");
    return load_graph(parts[1]);
  }
  if (kind == "cycle") {
    if (parts.size() != 2) throw std::invalid_argument("expected cycle:N");
    return make_cycle(parse_int(parts[1], "cycle size"), false);
  }
  if (kind == "complete") {
    if (parts.size() != 2) throw std::invalid_argument("expected complete:N");
    return make_complete(parse_int(parts[1], "graph size"));
  }
  if (kind == "counterexample") {
    if (parts.size() != 3)
      throw std::invalid_argument("expected counterexample:P:CLIQUES");
    return make_counterexample(parse_rational(parts[1]),
                               parse_int(parts[2], "clique count"));
  }
  if (kind == "random-regular") {
    if (parts.size() != 3)
      throw std::invalid_argument("expected random-regular:N:D");
    return make_random_regular(parse_int(parts[1], "graph size"),
                               parse_int(parts[2], "degree"),
                               mix64(seed ^ 0x6a5e'ed00ull));
  }
  throw std::invalid_argument("unknown graph spec '" + spec + "'");
}

InteractionRule parse_rule(const std::string& name) {
  if (name == "majority") return InteractionRule::majority();
  if (name == "plurality") return InteractionRule::weighted_plurality();
  if (name == "unanimity-switch") return InteractionRule::unanimity_switch();
  throw std::invalid_argument("unknown rule '" + name + "'");
}

ElectionSystem parse_election(const std::string& text, int q) {
  const auto parts = split(text, ':');
  if (parts[0] == "plurality" && parts.size() == 1)
    return ElectionSystem::plurality_rule(q);
  if (parts[0] == "prime" && parts.size() == 1)
    return ElectionSystem::prime_transitive_rule(q);
  if (parts[0] == "threshold" && parts.size() == 2)
    return ElectionSystem::threshold_rule(parse_rational(parts[1]));
  if (parts[0] == "dictator" && parts.size() == 2)
    return ElectionSystem::dictator_rule(parse_int(parts[1], "dictator index"));
  throw std::invalid_argument("unknown election '" + text + "'");
}

// Prepares a graph for a rule: majority gets tie-proofed, plurality gets
// generic weights (scale 1/n^3) when the graph has none.
Graph prepare_graph(Graph g, const InteractionRule& rule, std::uint64_t seed) {
  if (rule.kind == InteractionRule::Kind::majority) return tie_proof(g);
  if (rule.kind == InteractionRule::Kind::weighted_plurality && !g.weighted()) {
    const double n = g.vertex_count();
    return perturb_weights(g, 1.0 / (n * n * n), mix64(seed ^ 0x6a5e'ed01ull));
  }
  return g;
}

struct CommonOpts {
  std::string seed_text;
  std::string out;
  int workers = 1;

  std::uint64_t seed() const {
    if (!seed_text.empty()) return parse_seed(seed_text);
    if (const char* env = std::getenv("OPDYN_SEED")) return parse_seed(env);
    return kDefaultSeed;
  }
};

void add_common(CLI::App* cmd, CommonOpts& c, const std::string& default_out) {
  cmd->add_option("--seed", c.seed_text,
                  "master seed (decimal or 0x hex); default 0xD1CE, or "
                  "OPDYN_SEED when set");
  cmd->add_option("--workers", c.workers, "worker threads")
      ->check(CLI::Range(1, 256));
  cmd->add_option("-o,--out", c.out, "output path")->default_val(default_out);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
  if (!out) throw std::invalid_argument("write failed for " + path);
}

void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string trajectory_csv(const TrajectoryRecord& rec) {
  std::ostringstream out;
  out << "t";
  for (int a = 0; a < rec.q; ++a) out << ",N_" << a;
  out << ",L\n";
  char buf[32];
  for (int t = 0; t <= rec.t_end(); ++t) {
    out << t;
    const auto row = rec.tally(t);
    for (int a = 0; a < rec.q; ++a) out << "," << row[a];
    out << ",";
    if (t < static_cast<int>(rec.potential.size())) {
      std::snprintf(buf, sizeof buf, "%.17g", rec.potential[t]);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

// ---- subcommand state ----

struct MakeGraphCmd {
  std::string graph;
  CommonOpts common;
};

struct SimulateCmd {
  std::string graph;
  std::string rule = "majority";
  int q = 2;
  std::string p_text, delta_text;
  int rounds = -1;
  CommonOpts common;
};

struct EfficiencyCmd {
  std::string graph;
  std::string rule = "majority";
  std::string election = "plurality";
  int q = 2;
  std::string p_text, delta_text;
  int rounds = -1;
  int trials = 1000;
  CommonOpts common;
};

struct CounterexampleCmd {
  std::string p_text = "2/3";
  int cliques = 50;
  int trials = 10000;
  bool condition_a = false;
  CommonOpts common;
};

struct UnanimityCmd {
  std::string graph = "random-regular:2000:128";
  int q = 2;
  std::string p0_text = "0.9";
  int t_max = -1;
  int trials = 200;
  CommonOpts common;
};

struct CycleLimitCmd {
  int n = 2001;
  std::string p_text = "0.75";
  int rounds = 200;
  int trials = 20000;
  bool deep = false;
  CommonOpts common;
};

struct SweepCmd {
  std::string graph;
  std::string p_text = "0.75";
  std::string alphas = "0.5,0.6,0.7,0.8,0.9";
  int rounds = -1;
  int trials = 1000;
  std::string format = "csv";
  CommonOpts common;
};

struct InfluenceCmd {
  std::string election = "plurality";
  int q = 2;
  int n = 3;
  int voter = 0;
  std::string p_text, delta_text;
  std::string mode = "exact";
  long long budget = 1 << 20;
  CommonOpts common;
};

struct SpectrumCmd {
  std::string graph;
  CommonOpts common;
};

struct CheckCmd {
  long long budget = 2'000'000;
  CommonOpts common;
};

double delta_from(const std::string& p_text, const std::string& delta_text,
                  int q) {
  if (!p_text.empty() && !delta_text.empty())
    throw std::invalid_argument("give either --p or --delta, not both");
  if (!delta_text.empty()) return parse_rational(delta_text);
  if (!p_text.empty()) {
    if (q != 2) throw std::invalid_argument("--p needs q = 2; use --delta");
    const double p = parse_rational(p_text);
    if (!(p >= 0.5 && p <= 1.0))
      throw std::invalid_argument("--p must lie in [1/2, 1]");
    return 2.0 * p - 1.0;
  }
  return 0.0;
}

int run_make_graph(const MakeGraphCmd& c) {
  const Graph g = parse_graph_spec(c.graph, c.common.seed());
  save_graph(g, c.common.out);
  std::cout << "wrote " << c.common.out << ": n=" << g.vertex_count()
            << " edges=" << g.edge_count()
            << " weighted=" << (g.weighted() ? 1 : 0) << "\n";
  return 0;
}

int run_simulate(const SimulateCmd& c) {
  const std::uint64_t seed = c.common.seed();
  const InteractionRule rule = parse_rule(c.rule);
  const Graph g = prepare_graph(parse_graph_spec(c.graph, seed), rule, seed);
  const double delta = delta_from(c.p_text, c.delta_text, c.q);
  const InitialDistribution dist = InitialDistribution::canonical_bias(c.q, delta);

  const OpinionState s0 = sample_initial(g, dist, mix64(seed ^ 0x51));
  RunOptions opt;
  opt.t_max = c.rounds >= 0 ? c.rounds : 10 * g.vertex_count();
  opt.record_potential = g.weighted();
  const TrajectoryRecord rec = run(g, rule, s0, opt);

  write_text(c.common.out, trajectory_csv(rec));
  if (rec.period)
    std::cout << "period=" << *rec.period << " entry=" << rec.entry_time
              << " t_end=" << rec.t_end() << "\n";
  else
    std::cout << "no period detected by t=" << rec.t_end() << "\n";
  std::cout << "wrote " << c.common.out << "\n";
  return 0;
}

int run_efficiency(const EfficiencyCmd& c) {
  ExperimentConfig cfg;
  cfg.rule = parse_rule(c.rule);
  cfg.q = c.q;
  cfg.election = parse_election(c.election, c.q);
  cfg.delta = delta_from(c.p_text, c.delta_text, c.q);
  cfg.rounds = c.rounds;
  cfg.trials = c.trials;
  cfg.seed = c.common.seed();
  cfg.workers = c.common.workers;

  const Graph g =
      prepare_graph(parse_graph_spec(c.graph, cfg.seed), cfg.rule, cfg.seed);
  const ExperimentResult res = estimate_efficiency(g, cfg);

  // worker count stays out of the echo: results are identical for any
  // partitioning, and the echo should only carry what shapes the statistics
  const json echo{{"command", "efficiency"}, {"graph", c.graph},
                  {"rule", cfg.rule.name()},  {"election", cfg.election.name()},
                  {"q", cfg.q},               {"delta", cfg.delta},
                  {"rounds", c.rounds},       {"trials", cfg.trials},
                  {"seed", cfg.seed},         {"out", c.common.out}};
  write_json(c.common.out, res.to_json(echo));
  std::cout << "estimate=" << res.estimate << " half_width=" << res.half_width
            << "\nwrote " << c.common.out << "\n";
  return 0;
}

int run_counterexample(const CounterexampleCmd& c) {
  const double p = parse_rational(c.p_text);
  const std::uint64_t seed = c.common.seed();
  const ExperimentResult res = counterexample_failure(
      p, c.cliques, c.trials, seed, c.common.workers, c.condition_a);

  const json echo{{"command", "counterexample"},
                  {"p", c.p_text},
                  {"cliques", c.cliques},
                  {"trials", c.trials},
                  {"condition_group_a", c.condition_a},
                  {"seed", seed},
                  {"out", c.common.out}};
  write_json(c.common.out, res.to_json(echo));
  std::cout << "failure_rate=" << res.estimate
            << " analytic_lower_bound=" << res.details["analytic_lower_bound"]
            << "\nwrote " << c.common.out << "\n";
  return 0;
}

int run_unanimity(const UnanimityCmd& c) {
  const std::uint64_t seed = c.common.seed();
  const double p0 = parse_rational(c.p0_text);
  if (!(p0 > 1.0 / c.q && p0 <= 1.0))
    throw std::invalid_argument("--p0 must exceed 1/q");
  const double delta = (c.q * p0 - 1.0) / (c.q - 1.0);
  const InitialDistribution dist = InitialDistribution::canonical_bias(c.q, delta);

  const InteractionRule rule = c.q == 2 ? InteractionRule::majority()
                                        : InteractionRule::weighted_plurality();
  const Graph g = prepare_graph(parse_graph_spec(c.graph, seed), rule, seed);
  const SpectralCertificate cert = spectral_certificate(g);
  const UnanimityReport rep = unanimity_experiment(
      g, cert, dist, c.t_max, c.trials, seed, c.common.workers);

  const json echo{{"command", "unanimity"}, {"graph", c.graph},
                  {"q", c.q},               {"p0", p0},
                  {"t_max", c.t_max},       {"trials", c.trials},
                  {"seed", seed},           {"out", c.common.out}};
  write_json(c.common.out, rep.to_json(echo));
  std::cout << "unanimity_rate=" << rep.estimate
            << " trigger_violations=" << rep.trigger_violations
            << " unstable_violations=" << rep.unstable_violations << "\nwrote "
            << c.common.out << "\n";
  return rep.trigger_violations + rep.unstable_violations > 0 ? kExitViolation
                                                              : 0;
}

int run_cycle_limit(const CycleLimitCmd& c) {
  const std::uint64_t seed = c.common.seed();
  const CycleLimitReport rep =
      cycle_closed_form_check(c.n, parse_rational(c.p_text), c.rounds,
                              c.trials, seed, c.common.workers, c.deep);

  const json echo{{"command", "cycle-limit"}, {"n", c.n},
                  {"p", c.p_text},            {"rounds", c.rounds},
                  {"trials", c.trials},       {"deep_oracle_check", c.deep},
                  {"seed", seed},             {"out", c.common.out}};
  write_json(c.common.out, rep.to_json(echo));
  std::cout << "estimate=" << rep.estimate << " closed_form=" << rep.closed_form
            << " oracle_mismatches=" << rep.oracle_mismatches << "\nwrote "
            << c.common.out << "\n";
  return rep.oracle_mismatches > 0 ? kExitViolation : 0;
}

int run_sweep(const SweepCmd& c) {
  const std::uint64_t seed = c.common.seed();
  const double p = parse_rational(c.p_text);
  std::vector<double> alphas;
  for (const auto& part : split(c.alphas, ','))
    alphas.push_back(parse_rational(part));

  const InteractionRule rule = InteractionRule::majority();
  const Graph g = prepare_graph(parse_graph_spec(c.graph, seed), rule, seed);
  const int rounds = c.rounds >= 0 ? c.rounds : 10 * g.vertex_count();
  const ThresholdSweepReport rep =
      threshold_sweep(g, p, alphas, rounds, c.trials, seed, c.common.workers);

  if (c.format == "csv") {
    write_text(c.common.out, rep.to_csv());
  } else if (c.format == "json") {
    const json echo{{"command", "threshold-sweep"}, {"graph", c.graph},
                    {"p", c.p_text},                {"alphas", c.alphas},
                    {"rounds", rounds},             {"trials", c.trials},
                    {"seed", seed},                 {"out", c.common.out}};
    write_json(c.common.out, rep.to_json(echo));
  } else {
    throw std::invalid_argument("format must be csv or json");
  }
  std::cout << "wrote " << c.common.out << "\n";
  return 0;
}

int run_influence(const InfluenceCmd& c) {
  const std::uint64_t seed = c.common.seed();
  const ElectionSystem election = parse_election(c.election, c.q);
  const double delta = delta_from(c.p_text, c.delta_text, c.q);
  const InitialDistribution dist =
      InitialDistribution::canonical_bias(c.q, delta);
  const bool exact = c.mode == "exact";
  if (!exact && c.mode != "sampled")
    throw std::invalid_argument("mode must be exact or sampled");

  const VoteFn fn = [&](std::span<const Opinion> x) { return election.elect(x); };
  const double value =
      estimate_influence(fn, c.n, dist, c.voter, exact, c.budget, seed);

  const json out{{"command", "influence"},
                 {"election", election.name()},
                 {"q", c.q},
                 {"n", c.n},
                 {"voter", c.voter},
                 {"delta", delta},
                 {"mode", c.mode},
                 {"budget", c.budget},
                 {"seed", seed},
                 {"influence", value}};
  write_json(c.common.out, out);
  std::cout << "influence=" << value << "\nwrote " << c.common.out << "\n";
  return 0;
}

int run_spectrum(const SpectrumCmd& c) {
  const Graph g = parse_graph_spec(c.graph, c.common.seed());
  const SpectralCertificate cert = spectral_certificate(g);
  const json out{{"command", "spectrum"},
                 {"graph", c.graph},
                 {"certificate", {{"d", cert.d},
                                  {"lambda", cert.lambda},
                                  {"ratio", cert.ratio()},
                                  {"tol", cert.tol}}},
                 {"certified_three_sixteenths", cert.ratio() <= 3.0 / 16.0}};
  if (!c.common.out.empty()) write_json(c.common.out, out);
  std::cout << "d=" << cert.d << " lambda=" << cert.lambda
            << " ratio=" << cert.ratio() << " certified="
            << (cert.ratio() <= 3.0 / 16.0 ? "yes" : "no") << "\n";
  return 0;
}

int run_check(const CheckCmd& c) {
  struct Target {
    std::string name;
    VoteFn fn;
    int q, n;
    bool fair, monotone, shift;
  };

  const auto maj3 = [](std::span<const Opinion> x) {
    int ones = 0;
    for (Opinion a : x) ones += a;
    return static_cast<Opinion>(2 * ones > static_cast<int>(x.size()) ? 1 : 0);
  };
  // the local update rule of the everyone-else-agrees dynamics: coordinate 0
  // plays the role of the vertex's own previous opinion
  const auto unanimity4 = [](std::span<const Opinion> x) {
    for (std::size_t i = 2; i < x.size(); ++i)
      if (x[i] != x[1]) return x[0];
    return x[1];
  };

  const std::vector<Target> targets{
      {"plurality-tie-free-q2-n5",
       [](std::span<const Opinion> x) { return elect_prime_transitive(x, 2); },
       2, 5, true, true, true},
      {"plurality-tie-free-q3-n5",
       [](std::span<const Opinion> x) { return elect_prime_transitive(x, 3); },
       3, 5, true, true, true},
      {"threshold-0.75-n5",
       [](std::span<const Opinion> x) { return elect_threshold(x, 0.75); },
       2, 5, false, true, false},
      {"dictator-0-n5",
       [](std::span<const Opinion> x) { return elect_dictator(x, 0); },
       2, 5, true, true, false},
      {"majority-update-n3", maj3, 2, 3, true, true, true},
      {"unanimity-switch-update-n4", unanimity4, 2, 4, true, true, false},
  };

  json results = json::array();
  long long total_violations = 0;
  for (const auto& t : targets) {
    std::vector<CheckReport> reports;
    if (t.fair) reports.push_back(check_fair(t.fn, t.q, t.n, c.budget));
    if (t.monotone) reports.push_back(check_monotone(t.fn, t.q, t.n, c.budget));
    if (t.shift)
      reports.push_back(check_transitive_shift(t.fn, t.q, t.n, c.budget));
    for (const auto& rep : reports) {
      total_violations += rep.violation_count;
      results.push_back({{"target", t.name},
                         {"property", rep.property},
                         {"checked", rep.checked},
                         {"mode", rep.exhaustive ? "exhaustive" : "sampled"},
                         {"violations", rep.violation_count}});
      std::cout << t.name << " " << rep.property << ": "
                << (rep.ok() ? "ok" : "VIOLATED") << " (" << rep.checked
                << (rep.exhaustive ? " exhaustive" : " sampled") << " checks)\n";
    }
  }

  const json out{{"command", "check-properties"},
                 {"budget", c.budget},
                 {"results", results},
                 {"violations", total_violations}};
  if (!c.common.out.empty()) write_json(c.common.out, out);
  return total_violations > 0 ? kExitViolation : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opinion dynamics on social networks: simulation laboratory"};
  app.require_subcommand(1);

  MakeGraphCmd mk;
  auto* mk_cmd = app.add_subcommand("make-graph", "build a graph and save it");
  mk_cmd->add_option("--graph", mk.graph, "graph spec")->required();
  add_common(mk_cmd, mk.common, "graph.txt");

  SimulateCmd sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "one trajectory, written as CSV");
  sim_cmd->add_option("--graph", sim.graph, "graph spec")->required();
  sim_cmd->add_option("--rule", sim.rule, "majority|plurality|unanimity-switch");
  sim_cmd->add_option("--q", sim.q, "number of alternatives")->check(CLI::Range(2, 64));
  sim_cmd->add_option("--p", sim.p_text, "P(opinion 0) for q = 2");
  sim_cmd->add_option("--delta", sim.delta_text, "bias toward 0 in [0, 1]");
  sim_cmd->add_option("--rounds", sim.rounds, "max steps (default 10n)");
  add_common(sim_cmd, sim.common, "trajectory.csv");

  EfficiencyCmd eff;
  auto* eff_cmd = app.add_subcommand(
      "efficiency", "frequency of electing the initially favored opinion");
  eff_cmd->add_option("--graph", eff.graph, "graph spec")->required();
  eff_cmd->add_option("--rule", eff.rule, "majority|plurality|unanimity-switch");
  eff_cmd->add_option("--election", eff.election,
                      "plurality|prime|threshold:A|dictator:I");
  eff_cmd->add_option("--q", eff.q, "number of alternatives")->check(CLI::Range(2, 64));
  eff_cmd->add_option("--p", eff.p_text, "P(opinion 0) for q = 2");
  eff_cmd->add_option("--delta", eff.delta_text, "bias toward 0 in [0, 1]");
  eff_cmd->add_option("--rounds", eff.rounds, "election time (default 10n)");
  eff_cmd->add_option("--trials", eff.trials, "Monte Carlo trials")
      ->check(CLI::Range(1, 100000000));
  add_common(eff_cmd, eff.common, "efficiency.json");

  CounterexampleCmd cex;
  auto* cex_cmd = app.add_subcommand(
      "counterexample", "failure rate of the dense-low-degree construction");
  cex_cmd->add_option("--p", cex.p_text, "bias, rational in (1/2, 1)");
  cex_cmd->add_option("--cliques", cex.cliques, "number of cliques")
      ->check(CLI::Range(1, 10000000));
  cex_cmd->add_option("--trials", cex.trials, "Monte Carlo trials")
      ->check(CLI::Range(1, 100000000));
  cex_cmd->add_flag("--condition-group-a", cex.condition_a,
                    "force every group-A vertex to opinion 1 initially");
  add_common(cex_cmd, cex.common, "counterexample.json");

  UnanimityCmd una;
  auto* una_cmd = app.add_subcommand(
      "unanimity", "consensus triggers on a certified expander");
  una_cmd->add_option("--graph", una.graph, "graph spec");
  una_cmd->add_option("--q", una.q, "number of alternatives")->check(CLI::Range(2, 64));
  una_cmd->add_option("--p0", una.p0_text, "P(opinion 0), must exceed 1/q");
  una_cmd->add_option("--t-max", una.t_max, "step budget (default auto)");
  una_cmd->add_option("--trials", una.trials, "Monte Carlo trials")
      ->check(CLI::Range(1, 100000000));
  add_common(una_cmd, una.common, "unanimity.json");

  CycleLimitCmd cyc;
  auto* cyc_cmd = app.add_subcommand(
      "cycle-limit", "cycle eventual-opinion frequency vs the closed form");
  cyc_cmd->add_option("--n", cyc.n, "odd cycle size")->check(CLI::Range(3, 100000000));
  cyc_cmd->add_option("--p", cyc.p_text, "P(opinion 0)");
  cyc_cmd->add_option("--rounds", cyc.rounds, "election horizon, n > 2*rounds");
  cyc_cmd->add_option("--trials", cyc.trials, "Monte Carlo trials")
      ->check(CLI::Range(1, 100000000));
  cyc_cmd->add_flag("--deep-oracle-check", cyc.deep,
                    "verify settle times against recorded states");
  add_common(cyc_cmd, cyc.common, "cycle_limit.json");

  SweepCmd swp;
  auto* swp_cmd = app.add_subcommand(
      "threshold-sweep", "supermajority election success across alpha");
  swp_cmd->add_option("--graph", swp.graph, "graph spec")->required();
  swp_cmd->add_option("--p", swp.p_text, "P(opinion 0)");
  swp_cmd->add_option("--alphas", swp.alphas, "comma-separated alphas");
  swp_cmd->add_option("--rounds", swp.rounds, "election time (default 10n)");
  swp_cmd->add_option("--trials", swp.trials, "Monte Carlo trials")
      ->check(CLI::Range(1, 100000000));
  swp_cmd->add_option("--format", swp.format, "csv|json");
  add_common(swp_cmd, swp.common, "sweep.csv");

  InfluenceCmd inf;
  auto* inf_cmd =
      app.add_subcommand("influence", "single-voter influence of an election");
  inf_cmd->add_option("--election", inf.election,
                      "plurality|prime|threshold:A|dictator:I");
  inf_cmd->add_option("--q", inf.q, "number of alternatives")->check(CLI::Range(2, 8));
  inf_cmd->add_option("--n", inf.n, "number of voters")->check(CLI::Range(1, 64));
  inf_cmd->add_option("--voter", inf.voter, "voter index");
  inf_cmd->add_option("--p", inf.p_text, "P(opinion 0) for q = 2");
  inf_cmd->add_option("--delta", inf.delta_text, "bias toward 0 in [0, 1]");
  inf_cmd->add_option("--mode", inf.mode, "exact|sampled");
  inf_cmd->add_option("--budget", inf.budget, "profile budget");
  add_common(inf_cmd, inf.common, "influence.json");

  SpectrumCmd spec;
  auto* spec_cmd =
      app.add_subcommand("spectrum", "adjacency certificate (d, lambda)");
  spec_cmd->add_option("--graph", spec.graph, "graph spec")->required();
  add_common(spec_cmd, spec.common, "");

  CheckCmd chk;
  auto* chk_cmd = app.add_subcommand(
      "check-properties", "audit election and update-rule properties");
  chk_cmd->add_option("--budget", chk.budget, "checks per property");
  add_common(chk_cmd, chk.common, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (app.got_subcommand(mk_cmd)) return run_make_graph(mk);
    if (app.got_subcommand(sim_cmd)) return run_simulate(sim);
    if (app.got_subcommand(eff_cmd)) return run_efficiency(eff);
    if (app.got_subcommand(cex_cmd)) return run_counterexample(cex);
    if (app.got_subcommand(una_cmd)) return run_unanimity(una);
    if (app.got_subcommand(cyc_cmd)) return run_cycle_limit(cyc);
    if (app.got_subcommand(swp_cmd)) return run_sweep(swp);
    if (app.got_subcommand(inf_cmd)) return run_influence(inf);
    if (app.got_subcommand(spec_cmd)) return run_spectrum(spec);
    if (app.got_subcommand(chk_cmd)) return run_check(chk);
    std::cerr << "no subcommand selected\n";
    return kExitConfig;
  } catch (const tie_error& e) {
    std::cerr << "tie error: " << e.what() << "\n";
    return kExitTie;
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const construction_error& e) {
    std::cerr << "construction error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
