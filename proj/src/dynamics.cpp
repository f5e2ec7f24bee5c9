#include "opdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <utility>

#include "opdyn/errors.hpp"

namespace opdyn {

InitialDistribution InitialDistribution::biased_binary(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("p must lie in [0, 1]");
  return {2, {p, 1.0 - p}};
}

InitialDistribution InitialDistribution::canonical_bias(int q, double delta) {
  if (q < 2) throw std::invalid_argument("need q >= 2");
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("delta must lie in [0, 1]");
  std::vector<double> probs(q, (1.0 - delta) / q);
  probs[0] = 1.0 / q + (q - 1) * delta / q;
  return {q, std::move(probs)};
}

void InitialDistribution::validate() const {
  if (q < 2 || static_cast<int>(probs.size()) != q)
    throw std::invalid_argument("distribution needs one probability per alternative");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw std::invalid_argument("probabilities must sum to one");
}

Opinion InitialDistribution::sample(Rng& rng) const {
  const double u = rng.next_double();
  double acc = 0.0;
  for (int a = 0; a + 1 < q; ++a) {
    acc += probs[a];
    if (u < acc) return static_cast<Opinion>(a);
  }
  return static_cast<Opinion>(q - 1);
}

InteractionRule InteractionRule::majority() {
  return {Kind::majority, 1, true, true, nullptr};
}
InteractionRule InteractionRule::weighted_plurality() {
  return {Kind::weighted_plurality, 1, true, true, nullptr};
}
InteractionRule InteractionRule::unanimity_switch() {
  return {Kind::unanimity_switch, 1, true, true, nullptr};
}
InteractionRule InteractionRule::make_custom(CustomStepFn fn, int lookback,
                                             bool anonymous, bool monotone) {
  if (!fn) throw std::invalid_argument("custom rule needs a step function");
  if (lookback < 1) throw std::invalid_argument("lookback must be positive");
  return {Kind::custom, lookback, anonymous, monotone, std::move(fn)};
}

std::string InteractionRule::name() const {
  switch (kind) {
    case Kind::majority: return "majority";
    case Kind::weighted_plurality: return "weighted-plurality";
    case Kind::unanimity_switch: return "unanimity-switch";
    case Kind::custom: return "custom";
  }
  return "?";
}

Graph tie_proof(const Graph& g) {
  if (g.all_degrees_odd()) return g;
  std::vector<Graph::Edge> edges;
  edges.reserve(g.edges().size() + g.vertex_count());
  for (const auto& e : g.edges())
    if (e.u != e.v) edges.push_back(e);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const bool keep_loop = (g.degree(v) % 2 == 0) != g.has_self_loop(v);
    if (keep_loop) edges.push_back({v, v, 1.0});
  }
  Graph out = Graph::from_edges(g.vertex_count(), std::move(edges), g.weighted());
  out.inherit_metadata(g);
  return out;
}

OpinionState sample_initial(int n, const InitialDistribution& dist, Rng& rng) {
  dist.validate();
  OpinionState s;
  s.q = dist.q;
  s.t = 0;
  s.opinions.resize(n);
  for (int v = 0; v < n; ++v) s.opinions[v] = dist.sample(rng);
  return s;
}

OpinionState sample_initial(const Graph& g, const InitialDistribution& dist,
                            std::uint64_t seed) {
  Rng rng(mix64(seed));
  return sample_initial(g.vertex_count(), dist, rng);
}

namespace {

void check_state(const Graph& g, const OpinionState& s) {
  if (s.n() != g.vertex_count())
    throw std::invalid_argument("state size does not match the graph");
  if (s.q < 2) throw std::invalid_argument("need q >= 2");
  for (Opinion a : s.opinions)
    if (a >= s.q) throw std::invalid_argument("opinion out of range");
}

void majority_into(const Graph& g, const std::vector<Opinion>& in,
                   std::vector<Opinion>& out) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    const auto row = g.neighbors(v);
    int ones = 0;
    for (const std::int32_t u : row) ones += in[u];
    const int deg = static_cast<int>(row.size());
    if (2 * ones == deg)
      throw tie_error("majority tie at vertex " + std::to_string(v), v);
    out[v] = 2 * ones > deg ? 1 : 0;
  }
}

void plurality_into(const Graph& g, const std::vector<Opinion>& in, int q,
                    std::vector<Opinion>& out, std::vector<double>& scores) {
  const int n = g.vertex_count();
  scores.assign(q, 0.0);
  for (int v = 0; v < n; ++v) {
    std::fill(scores.begin(), scores.end(), 0.0);
    const auto row = g.neighbors(v);
    const auto w = g.edge_weights(v);
    for (std::size_t i = 0; i < row.size(); ++i) scores[in[row[i]]] += w[i];
    int best = 0;
    bool tied = false;
    for (int a = 1; a < q; ++a) {
      if (scores[a] > scores[best]) {
        best = a;
        tied = false;
      } else if (scores[a] == scores[best]) {
        tied = true;
      }
    }
    if (tied)
      throw tie_error("plurality tie at vertex " + std::to_string(v), v);
    out[v] = static_cast<Opinion>(best);
  }
}

void unanimity_into(const Graph& g, const std::vector<Opinion>& in,
                    std::vector<Opinion>& out) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    const auto row = g.neighbors(v);
    int agreed = -1;
    bool unanimous = true;
    for (const std::int32_t u : row) {
      if (u == v) continue;
      if (agreed < 0) {
        agreed = in[u];
      } else if (in[u] != agreed) {
        unanimous = false;
        break;
      }
    }
    out[v] = (unanimous && agreed >= 0) ? static_cast<Opinion>(agreed) : in[v];
  }
}

double potential_into(const Graph& g, const std::vector<Opinion>& prev,
                      const std::vector<Opinion>& next) {
  const int n = g.vertex_count();
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    const auto row = g.neighbors(v);
    const auto w = g.edge_weights(v);
    const Opinion a = next[v];
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i)
      if (prev[row[i]] == a) acc += w[i];
    total += acc;
  }
  return total;
}

}  // namespace

OpinionState step_majority(const Graph& g, const OpinionState& s) {
  check_state(g, s);
  if (s.q != 2) throw std::invalid_argument("majority needs q = 2");
  if (!g.all_degrees_odd())
    throw tie_error("even degree at vertex " +
                        std::to_string(g.first_even_degree_vertex()),
                    g.first_even_degree_vertex());
  OpinionState out{std::vector<Opinion>(s.opinions.size()), s.q, s.t + 1};
  majority_into(g, s.opinions, out.opinions);
  return out;
}

OpinionState step_plurality(const Graph& g, const OpinionState& s) {
  check_state(g, s);
  OpinionState out{std::vector<Opinion>(s.opinions.size()), s.q, s.t + 1};
  std::vector<double> scores;
  plurality_into(g, s.opinions, s.q, out.opinions, scores);
  return out;
}

OpinionState step_unanimity_switch(const Graph& g, const OpinionState& s) {
  check_state(g, s);
  OpinionState out{std::vector<Opinion>(s.opinions.size()), s.q, s.t + 1};
  unanimity_into(g, s.opinions, out.opinions);
  return out;
}

double potential(const Graph& g, const OpinionState& s_prev,
                 const OpinionState& s_next) {
  check_state(g, s_prev);
  check_state(g, s_next);
  return potential_into(g, s_prev.opinions, s_next.opinions);
}

std::vector<std::int64_t> TrajectoryRecord::counts_at(int t) const {
  if (t < 0) throw std::invalid_argument("negative time");
  if (t <= t_end()) {
    const auto row = tally(t);
    return {row.begin(), row.end()};
  }
  const auto& s = state_at(t);  // throws when not extrapolable
  std::vector<std::int64_t> out(q, 0);
  for (Opinion a : s.opinions) ++out[a];
  return out;
}

const OpinionState& TrajectoryRecord::state_at(int t) const {
  if (t < 0) throw std::invalid_argument("negative time");
  if (t == t_end()) return last;
  if (!states.empty() && t <= t_end()) return states[t];
  if (t == t_end() - 1 && !prev.opinions.empty()) return prev;
  if (!period)
    throw std::invalid_argument("time " + std::to_string(t) +
                                " is outside the recorded trajectory");
  if (t < entry_time)
    throw std::invalid_argument("time " + std::to_string(t) +
                                " predates the recorded cycle");
  if (*period == 1) return last;
  return (t % 2 == t_end() % 2) ? last : prev;
}

std::optional<Opinion> TrajectoryRecord::eventual_opinion(int v) const {
  if (!period) throw std::invalid_argument("no period was detected");
  if (*period == 1) return last.opinions[v];
  if (last.opinions[v] == prev.opinions[v]) return last.opinions[v];
  return std::nullopt;
}

TrajectoryRecord run(const Graph& g, const InteractionRule& rule,
                     const OpinionState& s0, const RunOptions& opt) {
  check_state(g, s0);
  const int n = g.vertex_count();
  const int t_max = opt.t_max >= 0 ? opt.t_max : 10 * n;
  const int q = s0.q;

  if (rule.kind == InteractionRule::Kind::majority) {
    if (q != 2) throw std::invalid_argument("majority needs q = 2");
    if (!g.all_degrees_odd())
      throw tie_error("even degree at vertex " +
                          std::to_string(g.first_even_degree_vertex()),
                      g.first_even_degree_vertex());
  }
  if (rule.kind == InteractionRule::Kind::custom && !rule.custom_fn)
    throw std::invalid_argument("custom rule has no step function");

  TrajectoryRecord rec;
  rec.n = n;
  rec.q = q;

  std::vector<Opinion> cur = s0.opinions;
  std::vector<Opinion> nxt(n), back2(n);
  std::vector<double> scores;

  // history window for custom rules: window.back() is time t-1
  std::deque<std::vector<Opinion>> window;
  if (rule.kind == InteractionRule::Kind::custom) window.push_back(cur);

  auto tally_into = [&](const std::vector<Opinion>& s) {
    const auto base = rec.counts.size();
    rec.counts.resize(base + q, 0);
    for (Opinion a : s) ++rec.counts[base + a];
  };
  tally_into(cur);
  if (opt.record_states) rec.states.push_back({cur, q, 0});

  auto step_into = [&](const std::vector<Opinion>& in, std::vector<Opinion>& out) {
    switch (rule.kind) {
      case InteractionRule::Kind::majority:
        majority_into(g, in, out);
        break;
      case InteractionRule::Kind::weighted_plurality:
        plurality_into(g, in, q, out, scores);
        break;
      case InteractionRule::Kind::unanimity_switch:
        unanimity_into(g, in, out);
        break;
      case InteractionRule::Kind::custom: {
        std::vector<const std::vector<Opinion>*> view;
        view.reserve(window.size());
        for (const auto& s : window) view.push_back(&s);
        for (int v = 0; v < n; ++v) {
          NeighborhoodHistory h(g, v, view, q);
          const Opinion a = rule.custom_fn(h);
          if (a >= q) throw std::invalid_argument("custom rule returned an opinion out of range");
          out[v] = a;
        }
        break;
      }
    }
  };

  int t = 0;
  bool stopped = false;
  while (t < t_max && !stopped) {
    step_into(cur, nxt);
    ++t;
    if (opt.record_potential)
      rec.potential.push_back(potential_into(g, cur, nxt));
    tally_into(nxt);
    if (opt.record_states) rec.states.push_back({nxt, q, t});

    if (opt.detect_period) {
      if (nxt == cur) {
        rec.period = 1;
        rec.entry_time = t - 1;
        stopped = true;
      } else if (t >= 2 && nxt == back2) {
        rec.period = 2;
        rec.entry_time = t - 2;
        stopped = true;
      }
    }

    if (!stopped && t < t_max) {
      if (rule.kind == InteractionRule::Kind::custom) {
        window.push_back(nxt);
        while (static_cast<int>(window.size()) > rule.lookback) window.pop_front();
      }
      std::swap(back2, cur);  // back2 <- state(t-1), cur holds the stale buffer
      std::swap(cur, nxt);    // cur <- state(t), nxt free for reuse
    }
  }
  // exits always leave nxt = state(t), cur = state(t-1) for t >= 1

  if (t == 0) {
    rec.last = {std::move(cur), q, 0};
  } else {
    rec.last = {std::move(nxt), q, t};
    rec.prev = {std::move(cur), q, t - 1};
  }
  return rec;
}

CycleEventual cycle_eventual_opinion(const OpinionState& initial, int v) {
  const int n = initial.n();
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  if (initial.q != 2) throw std::invalid_argument("cycle rule needs q = 2");
  if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");

  const auto& x = initial.opinions;
  const auto at = [&](int i) { return x[((i % n) + n) % n]; };

  for (int dist = 0; dist < n; ++dist) {
    // clockwise pair (v+dist, v+dist+1), counterclockwise (v-dist, v-dist-1)
    if (at(v + dist) == at(v + dist + 1))
      return {at(v + dist), dist};
    if (at(v - dist) == at(v - dist - 1))
      return {at(v - dist), dist};
  }
  throw std::invalid_argument("perfectly alternating cycle never settles");
}

}  // namespace opdyn
