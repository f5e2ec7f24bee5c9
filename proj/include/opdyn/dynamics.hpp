#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "opdyn/graph.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

using Opinion = std::uint8_t;

// Opinion vector at a single time step.
struct OpinionState {
  std::vector<Opinion> opinions;
  int q = 2;
  int t = 0;

  int n() const { return static_cast<int>(opinions.size()); }
  Opinion operator[](int v) const { return opinions[v]; }
};

// Product measure used for initial opinions. probs[a] = P(opinion a).
struct InitialDistribution {
  int q = 2;
  std::vector<double> probs;

  // P(0) = p, P(1) = 1 - p.
  static InitialDistribution biased_binary(double p);
  // P(0) = 1/q + (q-1)*delta/q, P(a) = (1 - delta)/q for a >= 1.
  // delta in [0, 1]; delta = 1 is the point mass on 0.
  static InitialDistribution canonical_bias(int q, double delta);

  void validate() const;
  Opinion sample(Rng& rng) const;
};

// What a custom rule is allowed to see when updating vertex v: the opinions
// of v's neighbors over the last `depth` steps, nothing else. v's own past
// opinion is visible only if v has a self-loop.
class NeighborhoodHistory {
public:
  NeighborhoodHistory(const Graph& g, int v,
                      std::span<const std::vector<Opinion>* const> window, int q)
      : g_(&g), v_(v), window_(window), q_(q) {}

  int vertex() const { return v_; }
  int q() const { return q_; }
  int neighbor_count() const { return g_->degree(v_); }
  // Number of past steps available; opinion(j, back) accepts back = 1..depth().
  int depth() const { return static_cast<int>(window_.size()); }
  bool self_in_neighborhood() const { return g_->has_self_loop(v_); }

  // Opinion of the j-th neighbor of v, `back` steps before the update.
  Opinion opinion(int j, int back = 1) const {
    return (*window_[window_.size() - back])[g_->neighbors(v_)[j]];
  }
  double weight(int j) const { return g_->edge_weights(v_)[j]; }

private:
  const Graph* g_;
  int v_;
  std::span<const std::vector<Opinion>* const> window_;
  int q_;
};

using CustomStepFn = std::function<Opinion(const NeighborhoodHistory&)>;

// An update rule for the synchronous dynamics. The built-ins are anonymous
// and monotone; custom rules declare what they claim and can be audited with
// the voting-module checkers.
struct InteractionRule {
  enum class Kind : std::uint8_t {
    majority,            // q = 2, all degrees odd
    weighted_plurality,  // any q; ties are an error, so weights should be generic
    unanimity_switch,    // keep own opinion unless all neighbors (minus self) agree
    custom
  };

  Kind kind = Kind::majority;
  int lookback = 1;  // history window for custom rules
  bool claims_anonymous = true;
  bool claims_monotone = true;
  CustomStepFn custom_fn;

  static InteractionRule majority();
  static InteractionRule weighted_plurality();
  static InteractionRule unanimity_switch();
  static InteractionRule make_custom(CustomStepFn fn, int lookback,
                                     bool anonymous, bool monotone);
  std::string name() const;
};

// Everything recorded about one run of the dynamics.
//
// counts_at/state_at accept any T >= 0: values past the simulated horizon are
// extrapolated through the detected period (throws std::invalid_argument if
// no period was found and T > t_end()).
struct TrajectoryRecord {
  int n = 0;
  int q = 2;

  // Tallies per step, flattened: tally(t, a) = counts[t*q + a], t = 0..t_end.
  std::vector<std::int64_t> counts;
  // potential[t] = L for the step t -> t+1, t = 0..t_end-1 (only when the
  // run recorded it).
  std::vector<double> potential;
  // Full states (only when the run recorded them), states[t] is time t.
  std::vector<OpinionState> states;

  OpinionState last;  // state at t_end()
  OpinionState prev;  // state at t_end() - 1; empty when t_end() == 0

  std::optional<int> period;  // 1 or 2 when detected
  int entry_time = -1;        // first t with state(t) inside the cycle

  int t_end() const { return last.t; }
  bool converged() const { return period.has_value(); }

  std::span<const std::int64_t> tally(int t) const {
    return {counts.data() + static_cast<std::size_t>(t) * q,
            static_cast<std::size_t>(q)};
  }
  std::vector<std::int64_t> counts_at(int t) const;
  const OpinionState& state_at(int t) const;

  // Constant opinion of v from entry_time on; nullopt if v alternates in a
  // period-2 cycle. Requires a detected period.
  std::optional<Opinion> eventual_opinion(int v) const;
};

struct RunOptions {
  int t_max = -1;  // -1 means 10 * n
  bool detect_period = true;
  bool record_states = false;
  bool record_potential = false;
};

// Toggles the self-loop at every even-degree vertex, yielding a graph where
// every degree is odd (so binary majority never ties). Idempotent; preserves
// family annotations.
Graph tie_proof(const Graph& g);

// Independent opinions from `dist`, one per vertex.
OpinionState sample_initial(const Graph& g, const InitialDistribution& dist,
                            std::uint64_t seed);
OpinionState sample_initial(int n, const InitialDistribution& dist, Rng& rng);

// One synchronous step. step_majority requires q = 2 and all degrees odd
// (throws tie_error naming the first even-degree vertex otherwise).
// step_plurality breaks no ties: an exact top-weight tie at any vertex is a
// tie_error naming it. step_unanimity_switch keeps X_v unless all neighbors
// other than v itself share an opinion.
OpinionState step_majority(const Graph& g, const OpinionState& s);
OpinionState step_plurality(const Graph& g, const OpinionState& s);
OpinionState step_unanimity_switch(const Graph& g, const OpinionState& s);

// Runs the dynamics from s0 until a period-1 or period-2 cycle is entered
// (when detect_period) or t_max steps have been taken.
TrajectoryRecord run(const Graph& g, const InteractionRule& rule,
                     const OpinionState& s0, const RunOptions& opt = {});

// L for the transition s_prev -> s_next: for every vertex v and neighbor w,
// adds M_wv when v's next opinion equals w's previous one. Nonnegative and
// nondecreasing along majority/plurality trajectories.
double potential(const Graph& g, const OpinionState& s_prev,
                 const OpinionState& s_next);

// Eventual opinion of vertex v under binary majority on the self-looped
// cycle whose initial state this is (vertex i adjacent to i-1, i, i+1 mod n).
// Let k be the distance from v to the nearest adjacent agreeing pair
// (X_j(0) = X_{j+1}(0)), searching both directions; the eventual opinion is
// that pair's value and X_v(t) equals it for every t >= k = settle_time.
// When both directions reach a pair at the same distance the two values
// coincide, because the window between them is alternating. Throws
// std::invalid_argument if no adjacent pair agrees (a perfectly alternating
// even cycle, which never settles).
struct CycleEventual {
  Opinion value;
  int settle_time;
};
CycleEventual cycle_eventual_opinion(const OpinionState& initial, int v);

}  // namespace opdyn
