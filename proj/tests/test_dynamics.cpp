#include <doctest.h>

#include <cstdint>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/rng.hpp"

using namespace opdyn;

namespace {

OpinionState state_of(std::vector<int> bits, int q = 2) {
  OpinionState s;
  s.q = q;
  s.t = 0;
  for (int b : bits) s.opinions.push_back(static_cast<Opinion>(b));
  return s;
}

std::vector<int> bits_of(const OpinionState& s) {
  return {s.opinions.begin(), s.opinions.end()};
}

}  // namespace

TEST_CASE("rng basics") {
  // splitmix64 reference vector for seed 0
  CHECK(mix64(0) == 0xE220A8397B1DCDAFull);
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

  Rng r(7);
  long long counts[3] = {0, 0, 0};
  for (int i = 0; i < 30000; ++i) ++counts[r.below(3)];
  for (long long c : counts) {
    CHECK(c > 9500);
    CHECK(c < 10500);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("initial distributions") {
  const auto bin = InitialDistribution::biased_binary(0.75);
  REQUIRE(bin.probs.size() == 2);
  CHECK(bin.probs[0] == 0.75);
  CHECK(bin.probs[1] == 0.25);

  const auto canon = InitialDistribution::canonical_bias(3, 0.85);
  REQUIRE(canon.probs.size() == 3);
  CHECK(canon.probs[0] == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(canon.probs[1] == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(canon.probs[2] == doctest::Approx(0.05).epsilon(1e-12));
  canon.validate();

  // delta = 0 is uniform, delta = 1 the point mass on 0
  CHECK(InitialDistribution::canonical_bias(4, 0.0).probs[0] == 0.25);
  CHECK(InitialDistribution::canonical_bias(4, 1.0).probs[0] == 1.0);

  CHECK_THROWS_AS(InitialDistribution::biased_binary(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(InitialDistribution::canonical_bias(3, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(InitialDistribution::canonical_bias(1, 0.5), std::invalid_argument);
  CHECK_THROWS_AS((InitialDistribution{2, {0.5, 0.6}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((InitialDistribution{2, {1.5, -0.5}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((InitialDistribution{3, {0.5, 0.5}}).validate(), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and hits the requested frequencies") {
  const Graph g = make_cycle(10000, true);
  const auto dist = InitialDistribution::biased_binary(0.75);
  const OpinionState s1 = sample_initial(g, dist, 123);
  const OpinionState s2 = sample_initial(g, dist, 123);
  CHECK(s1.opinions == s2.opinions);
  const OpinionState s3 = sample_initial(g, dist, 124);
  CHECK(s1.opinions != s3.opinions);

  int zeros = 0;
  for (Opinion a : s1.opinions) zeros += a == 0;
  CHECK(zeros > 7300);
  CHECK(zeros < 7700);
}

TEST_CASE("tie proofing toggles self-loops at even-degree vertices") {
  const Graph c4 = make_cycle(4, false);
  const Graph fixed = tie_proof(c4);
  CHECK(fixed.all_degrees_odd());
  CHECK(fixed.family() == Graph::Family::cycle);
  for (int v = 0; v < 4; ++v) {
    CHECK(fixed.has_self_loop(v));
    CHECK(fixed.degree(v) == 3);
  }

  // path: only the middle vertex has even degree
  const Graph path = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}, false);
  const Graph path_fixed = tie_proof(path);
  CHECK(path_fixed.all_degrees_odd());
  CHECK_FALSE(path_fixed.has_self_loop(0));
  CHECK(path_fixed.has_self_loop(1));
  CHECK_FALSE(path_fixed.has_self_loop(2));

  // an even-degree vertex that already has a loop loses it
  const Graph looped =
      Graph::from_edges(3, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 2, 1.0}}, false);
  const Graph toggled = tie_proof(looped);
  CHECK(toggled.all_degrees_odd());
  CHECK_FALSE(toggled.has_self_loop(0));
  CHECK(toggled.has_self_loop(1));
  CHECK(toggled.degree(0) == 1);

  // already odd everywhere: unchanged, and idempotent in general
  const Graph odd = make_cycle(5, true);
  CHECK(tie_proof(odd) == odd);
  CHECK(tie_proof(fixed) == fixed);
}

TEST_CASE("majority step") {
  const Graph k3 = tie_proof(make_complete(3));
  const OpinionState s = state_of({0, 0, 1});
  const OpinionState next = step_majority(k3, s);
  CHECK(bits_of(next) == std::vector<int>{0, 0, 0});
  CHECK(next.t == 1);

  // even degrees are rejected up front, naming the first offender
  try {
    step_majority(make_cycle(4, false), state_of({0, 1, 0, 1}));
    FAIL("expected tie_error");
  } catch (const tie_error& e) {
    CHECK(e.vertex() == 0);
  }

  CHECK_THROWS_AS(step_majority(k3, state_of({0, 2, 1}, 3)), std::invalid_argument);
  CHECK_THROWS_AS(step_majority(k3, state_of({0, 1})), std::invalid_argument);
}

TEST_CASE("plurality step") {
  // weighted star, q = 3: the center aggregates weights, leaves copy the center
  const Graph star = Graph::from_edges(
      4, {{0, 1, 1.0}, {0, 2, 0.6}, {0, 3, 0.7}}, true);
  const OpinionState s = state_of({2, 0, 1, 1}, 3);
  const OpinionState next = step_plurality(star, s);
  CHECK(bits_of(next) == std::vector<int>{1, 2, 2, 2});

  // an exact top tie names the vertex
  try {
    step_plurality(make_cycle(4, false), state_of({0, 0, 1, 1}));
    FAIL("expected tie_error");
  } catch (const tie_error& e) {
    CHECK(e.vertex() == 0);
  }
}

TEST_CASE("plurality equals majority on unit weights with odd degrees") {
  const Graph g = tie_proof(make_cycle(7, false));
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    OpinionState s;
    s.q = 2;
    for (int v = 0; v < 7; ++v)
      s.opinions.push_back(static_cast<Opinion>(rng.next() & 1));
    CHECK(step_plurality(g, s).opinions == step_majority(g, s).opinions);
  }
}

TEST_CASE("unanimity switch step") {
  const Graph star = Graph::from_edges(
      4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, false);
  const OpinionState s = state_of({0, 1, 1, 1});
  const OpinionState next = step_unanimity_switch(star, s);
  CHECK(bits_of(next) == std::vector<int>{1, 0, 0, 0});

  // a self-loop does not block the switch: only the other neighbors count
  const Graph looped = Graph::from_edges(2, {{0, 0, 1.0}, {0, 1, 1.0}}, false);
  const OpinionState t = state_of({0, 1});
  CHECK(bits_of(step_unanimity_switch(looped, t)) == std::vector<int>{1, 0});

  // disagreeing neighbors and isolated vertices keep their opinion
  const Graph mixed = Graph::from_edges(4, {{0, 1, 1.0}, {0, 2, 1.0}}, false);
  const OpinionState u = state_of({0, 1, 0, 1});
  CHECK(bits_of(step_unanimity_switch(mixed, u)) == std::vector<int>{0, 0, 0, 1});
}

TEST_CASE("run detects fixed points") {
  const Graph g = make_cycle(5, true);
  const TrajectoryRecord rec =
      run(g, InteractionRule::majority(), state_of({0, 0, 0, 0, 0}));
  REQUIRE(rec.converged());
  CHECK(*rec.period == 1);
  CHECK(rec.entry_time == 0);
  CHECK(rec.t_end() == 1);
  CHECK(bits_of(rec.last) == std::vector<int>{0, 0, 0, 0, 0});
  CHECK(bits_of(rec.prev) == std::vector<int>{0, 0, 0, 0, 0});
  for (int v = 0; v < 5; ++v) CHECK(rec.eventual_opinion(v) == Opinion{0});
  CHECK(rec.counts_at(0) == std::vector<std::int64_t>{5, 0});
  CHECK(rec.counts_at(100) == std::vector<std::int64_t>{5, 0});
}

TEST_CASE("run detects two-cycles and extrapolates through them") {
  const Graph g = tie_proof(make_cycle(4, false));
  const TrajectoryRecord rec =
      run(g, InteractionRule::majority(), state_of({0, 1, 0, 1}));
  REQUIRE(rec.converged());
  CHECK(*rec.period == 2);
  CHECK(rec.entry_time == 0);
  CHECK(rec.t_end() == 2);
  CHECK(bits_of(rec.last) == std::vector<int>{0, 1, 0, 1});
  CHECK(bits_of(rec.prev) == std::vector<int>{1, 0, 1, 0});
  for (int v = 0; v < 4; ++v) CHECK_FALSE(rec.eventual_opinion(v).has_value());
  CHECK(rec.counts_at(9) == std::vector<std::int64_t>{2, 2});
  CHECK(bits_of(rec.state_at(8)) == std::vector<int>{0, 1, 0, 1});
  CHECK(bits_of(rec.state_at(9)) == std::vector<int>{1, 0, 1, 0});
}

TEST_CASE("run without period detection stops at t_max") {
  const Graph g = tie_proof(make_cycle(4, false));
  RunOptions opt;
  opt.detect_period = false;
  opt.t_max = 7;
  const TrajectoryRecord rec =
      run(g, InteractionRule::majority(), state_of({0, 1, 0, 1}), opt);
  CHECK_FALSE(rec.converged());
  CHECK(rec.t_end() == 7);
  CHECK(bits_of(rec.state_at(7)) == std::vector<int>{1, 0, 1, 0});
  CHECK(bits_of(rec.state_at(6)) == std::vector<int>{0, 1, 0, 1});
  CHECK(rec.counts.size() == 16);  // (t_max + 1) * q
  // intermediate states were not recorded and there is no cycle to use
  CHECK_THROWS_AS(rec.state_at(3), std::invalid_argument);
  CHECK_THROWS_AS(rec.state_at(8), std::invalid_argument);
  CHECK_THROWS_AS(rec.eventual_opinion(0), std::invalid_argument);

  opt.record_states = true;
  const TrajectoryRecord full =
      run(g, InteractionRule::majority(), state_of({0, 1, 0, 1}), opt);
  REQUIRE(full.states.size() == 8);
  for (int t = 0; t <= 7; ++t) {
    CHECK(full.states[t].t == t);
    CHECK(bits_of(full.state_at(t)) ==
          (t % 2 ? std::vector<int>{1, 0, 1, 0} : std::vector<int>{0, 1, 0, 1}));
  }
}

TEST_CASE("run with t_max zero returns the initial state") {
  const Graph g = make_cycle(5, true);
  RunOptions opt;
  opt.t_max = 0;
  const TrajectoryRecord rec =
      run(g, InteractionRule::majority(), state_of({0, 1, 1, 0, 0}), opt);
  CHECK(rec.t_end() == 0);
  CHECK_FALSE(rec.converged());
  CHECK(bits_of(rec.last) == std::vector<int>{0, 1, 1, 0, 0});
  CHECK(rec.prev.opinions.empty());
  CHECK(rec.counts_at(0) == std::vector<std::int64_t>{3, 2});
  CHECK_THROWS_AS(rec.state_at(1), std::invalid_argument);
}

TEST_CASE("recorded potential is nondecreasing and matches the states") {
  const Graph g = tie_proof(make_random_regular(30, 4, 2));
  const auto dist = InitialDistribution::biased_binary(0.5);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const OpinionState s0 = sample_initial(g, dist, seed);
    RunOptions opt;
    opt.record_states = true;
    opt.record_potential = true;
    const TrajectoryRecord rec = run(g, InteractionRule::majority(), s0, opt);
    REQUIRE(rec.converged());
    REQUIRE(static_cast<int>(rec.potential.size()) == rec.t_end());
    for (std::size_t t = 0; t + 1 < rec.potential.size(); ++t)
      CHECK(rec.potential[t] <= rec.potential[t + 1]);
    for (int t = 0; t + 1 <= rec.t_end(); ++t)
      CHECK(rec.potential[t] ==
            potential(g, rec.state_at(t), rec.state_at(t + 1)));
  }
}

TEST_CASE("potential oracle values") {
  const Graph k3 = make_complete(3);
  const OpinionState all0 = state_of({0, 0, 0});
  CHECK(potential(k3, all0, all0) == 6.0);  // sum of degrees

  const Graph c4 = make_cycle(4, false);
  const OpinionState alt = state_of({0, 1, 0, 1});
  const OpinionState flip = state_of({1, 0, 1, 0});
  CHECK(potential(c4, alt, alt) == 0.0);
  CHECK(potential(c4, alt, flip) == 8.0);

  const Graph star = Graph::from_edges(
      4, {{0, 1, 1.0}, {0, 2, 0.6}, {0, 3, 0.7}}, true);
  const OpinionState s = state_of({2, 0, 1, 1}, 3);
  const OpinionState next = state_of({1, 2, 2, 2}, 3);
  CHECK(potential(star, s, s) == 0.0);
  CHECK(potential(star, s, next) == doctest::Approx(3.6).epsilon(1e-12));

  CHECK_THROWS_AS(potential(k3, all0, state_of({0, 0})), std::invalid_argument);
}

TEST_CASE("custom rules see the neighborhood through the history window") {
  // reimplement weighted majority as a custom rule; trajectories must agree
  const auto fn = [](const NeighborhoodHistory& h) -> Opinion {
    double total = 0.0, ones = 0.0;
    for (int j = 0; j < h.neighbor_count(); ++j) {
      total += h.weight(j);
      ones += h.weight(j) * h.opinion(j);
    }
    return 2.0 * ones > total ? 1 : 0;
  };
  const InteractionRule custom = InteractionRule::make_custom(fn, 1, true, true);
  CHECK(custom.name() == "custom");

  const Graph g = tie_proof(make_cycle(9, false));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const OpinionState s0 =
        sample_initial(g, InitialDistribution::biased_binary(0.5), seed);
    const TrajectoryRecord a = run(g, InteractionRule::majority(), s0);
    const TrajectoryRecord b = run(g, custom, s0);
    CHECK(a.counts == b.counts);
    CHECK(a.last.opinions == b.last.opinions);
    CHECK(a.period == b.period);
    CHECK(a.entry_time == b.entry_time);
  }
}

TEST_CASE("custom rules can look two steps back") {
  // copy neighbor 0 from two steps back once the window is deep enough
  const auto fn = [](const NeighborhoodHistory& h) -> Opinion {
    CHECK_FALSE(h.self_in_neighborhood());
    CHECK(h.neighbor_count() == 2);
    return h.opinion(0, h.depth() >= 2 ? 2 : 1);
  };
  const Graph g = make_cycle(3, false);
  const TrajectoryRecord rec = run(
      g, InteractionRule::make_custom(fn, 2, true, false), state_of({0, 1, 1}));
  REQUIRE(rec.converged());
  CHECK(*rec.period == 1);
  CHECK(rec.entry_time == 1);
  CHECK(bits_of(rec.last) == std::vector<int>{1, 0, 0});
}

TEST_CASE("custom rule validation") {
  CHECK_THROWS_AS(InteractionRule::make_custom(nullptr, 1, true, true),
                  std::invalid_argument);
  const auto fn = [](const NeighborhoodHistory&) -> Opinion { return 2; };
  CHECK_THROWS_AS(InteractionRule::make_custom(fn, 0, true, true),
                  std::invalid_argument);
  // out-of-range output is caught during the run
  const Graph g = make_cycle(3, false);
  CHECK_THROWS_AS(run(g, InteractionRule::make_custom(fn, 1, true, true),
                      state_of({0, 1, 0})),
                  std::invalid_argument);
}

TEST_CASE("rule and self-loop visibility metadata") {
  CHECK(InteractionRule::majority().name() == "majority");
  CHECK(InteractionRule::weighted_plurality().name() == "weighted-plurality");
  CHECK(InteractionRule::unanimity_switch().name() == "unanimity-switch");

  const auto probe = [](const NeighborhoodHistory& h) -> Opinion {
    CHECK(h.self_in_neighborhood());
    CHECK(h.neighbor_count() == 3);
    CHECK(h.depth() == 1);
    CHECK(h.q() == 2);
    return 0;
  };
  RunOptions opt;
  opt.t_max = 1;
  run(tie_proof(make_cycle(4, false)),
      InteractionRule::make_custom(probe, 1, true, true),
      state_of({0, 1, 0, 1}), opt);
}

TEST_CASE("unanimity switch oscillates on the star") {
  const Graph star = Graph::from_edges(
      4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, false);
  const TrajectoryRecord rec =
      run(star, InteractionRule::unanimity_switch(), state_of({0, 1, 1, 1}));
  REQUIRE(rec.converged());
  CHECK(*rec.period == 2);
  CHECK(rec.entry_time == 0);
  CHECK(bits_of(rec.state_at(5)) == std::vector<int>{1, 0, 0, 0});
}

TEST_CASE("eventual opinion on the self-looped cycle: frozen example") {
  const OpinionState x = state_of({0, 0, 1, 0, 1, 1, 0});
  const CycleEventual at3 = cycle_eventual_opinion(x, 3);
  CHECK(at3.value == 1);
  CHECK(at3.settle_time == 1);
  const CycleEventual at0 = cycle_eventual_opinion(x, 0);
  CHECK(at0.value == 0);
  CHECK(at0.settle_time == 0);
  const CycleEventual at5 = cycle_eventual_opinion(x, 5);
  CHECK(at5.value == 1);
  CHECK(at5.settle_time == 0);
  const CycleEventual at6 = cycle_eventual_opinion(x, 6);
  CHECK(at6.value == 0);
  CHECK(at6.settle_time == 0);

  CHECK_THROWS_AS(cycle_eventual_opinion(state_of({0, 1}), 0), std::invalid_argument);
  CHECK_THROWS_AS(cycle_eventual_opinion(state_of({0, 1, 2}, 3), 0), std::invalid_argument);
  CHECK_THROWS_AS(cycle_eventual_opinion(x, 7), std::invalid_argument);
  CHECK_THROWS_AS(cycle_eventual_opinion(state_of({0, 1, 0, 1, 0, 1}), 2),
                  std::invalid_argument);
}

TEST_CASE("eventual opinion matches the simulation on every small cycle") {
  for (int n = 3; n <= 7; ++n) {
    const Graph g = make_cycle(n, true);
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      OpinionState s0;
      s0.q = 2;
      for (int v = 0; v < n; ++v)
        s0.opinions.push_back(static_cast<Opinion>((mask >> v) & 1));

      bool alternating = n % 2 == 0;
      for (int v = 0; alternating && v < n; ++v)
        if (s0.opinions[v] == s0.opinions[(v + 1) % n]) alternating = false;

      RunOptions opt;
      opt.record_states = true;
      const TrajectoryRecord rec = run(g, InteractionRule::majority(), s0, opt);
      REQUIRE(rec.converged());

      if (alternating) {
        CHECK(*rec.period == 2);
        CHECK_THROWS_AS(cycle_eventual_opinion(s0, 0), std::invalid_argument);
        continue;
      }
      REQUIRE(*rec.period == 1);
      for (int v = 0; v < n; ++v) {
        const CycleEventual oracle = cycle_eventual_opinion(s0, v);
        REQUIRE(rec.eventual_opinion(v) == oracle.value);
        REQUIRE(oracle.settle_time <= rec.t_end());
        for (int t = oracle.settle_time; t <= rec.t_end(); ++t)
          REQUIRE(rec.states[t].opinions[v] == oracle.value);
      }
    }
  }
}

TEST_CASE("eventual opinion matches the simulation on a larger cycle") {
  const int n = 21;
  const Graph g = make_cycle(n, true);
  const auto dist = InitialDistribution::biased_binary(0.5);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const OpinionState s0 = sample_initial(g, dist, seed);
    RunOptions opt;
    opt.record_states = true;
    const TrajectoryRecord rec = run(g, InteractionRule::majority(), s0, opt);
    REQUIRE(rec.converged());
    REQUIRE(*rec.period == 1);
    for (int v = 0; v < n; ++v) {
      const CycleEventual oracle = cycle_eventual_opinion(s0, v);
      REQUIRE(rec.eventual_opinion(v) == oracle.value);
      for (int t = oracle.settle_time; t <= rec.t_end(); ++t)
        REQUIRE(rec.states[t].opinions[v] == oracle.value);
    }
  }
}
