#include <doctest.h>

#include <algorithm>
#include <vector>

#include "opdyn/errors.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/voting.hpp"

using namespace opdyn;

namespace {

std::vector<Opinion> votes(std::initializer_list<int> xs) {
  std::vector<Opinion> v;
  for (int x : xs) v.push_back(static_cast<Opinion>(x));
  return v;
}

// orbit partitions compare equal after sorting
std::vector<std::vector<int>> sorted_orbits(SocialTypePartition part) {
  for (auto& o : part.orbits) std::sort(o.begin(), o.end());
  std::sort(part.orbits.begin(), part.orbits.end());
  return part.orbits;
}

}  // namespace

TEST_CASE("plurality elections") {
  CHECK(elect_plurality(votes({0, 1, 1, 2, 1}), 3) == 1);
  CHECK(elect_plurality(votes({0, 0, 1}), 2) == 0);
  try {
    elect_plurality(votes({0, 1}), 2);
    FAIL("expected tie_error");
  } catch (const tie_error& e) {
    CHECK(e.vertex() == -1);
  }
  CHECK_THROWS_AS(elect_plurality(votes({0, 3}), 3), std::invalid_argument);
  CHECK_THROWS_AS(elect_plurality(votes({}), 2), std::invalid_argument);
}

TEST_CASE("threshold elections") {
  // one supporter out of ten meets the 1 - alpha = 0.1 quota exactly
  std::vector<Opinion> x(10, 0);
  x[4] = 1;
  CHECK(elect_threshold(x, 0.9) == 1);
  CHECK(elect_threshold(x, 0.5) == 0);
  CHECK(elect_threshold(votes({1, 1, 1, 0}), 0.5) == 1);

  CHECK_THROWS_AS(elect_threshold(x, 0.4), std::invalid_argument);
  CHECK_THROWS_AS(elect_threshold(x, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(elect_threshold(votes({0, 2}), 0.5), std::invalid_argument);
}

TEST_CASE("threshold at one half is plurality on odd electorates") {
  const int n = 7;
  std::vector<Opinion> x(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i) x[i] = static_cast<Opinion>((mask >> i) & 1);
    CHECK(elect_threshold(x, 0.5) == elect_plurality(x, 2));
  }
}

TEST_CASE("dictator elections") {
  CHECK(elect_dictator(votes({1, 0, 0}), 0) == 1);
  CHECK(elect_dictator(votes({1, 0, 0}), 2) == 0);
  CHECK_THROWS_AS(elect_dictator(votes({1, 0}), 2), std::invalid_argument);
  CHECK_THROWS_AS(elect_dictator(votes({1, 0}), -1), std::invalid_argument);
}

TEST_CASE("tie-free plurality on prime electorates: worked examples") {
  // tallies 2-2-1, supporters M = {0,1,2,3}, |M|^-1 = 4, k = 4*6 mod 5 = 4,
  // first supporter at or after 4 is voter 0
  CHECK(elect_prime_transitive(votes({0, 0, 1, 1, 2}), 3) == 0);
  CHECK(elect_prime_transitive(votes({1, 1, 2, 2, 0}), 3) == 1);
  // strict winner short-circuits the tie machinery
  CHECK(elect_prime_transitive(votes({0, 0, 1, 2, 2, 2, 1}), 3) == 2);

  // cyclic relabeling of voters preserves the outcome
  CHECK(elect_prime_transitive(votes({1, 0, 1, 2, 0}), 3) ==
        elect_prime_transitive(votes({0, 1, 0, 1, 2}), 3));

  CHECK_THROWS_AS(elect_prime_transitive(votes({0, 1, 0, 1}), 2),
                  std::invalid_argument);  // composite
  CHECK_THROWS_AS(elect_prime_transitive(votes({0, 1}), 2),
                  std::invalid_argument);  // needs n > q
  CHECK_THROWS_AS(elect_prime_transitive(votes({0, 1, 2, 3, 4}), 5),
                  std::invalid_argument);
}

TEST_CASE("tie-free plurality always elects a tied leader") {
  const int n = 5, q = 3;
  std::vector<Opinion> x(n, 0);
  for (;;) {
    std::vector<int> counts(q, 0);
    for (Opinion a : x) ++counts[a];
    const int top = *std::max_element(counts.begin(), counts.end());
    const Opinion w = elect_prime_transitive(x, q);
    CHECK(counts[w] == top);

    int i = 0;
    while (i < n && x[i] + 1 == q) x[i++] = 0;
    if (i == n) break;
    ++x[i];
  }
}

TEST_CASE("election system wrappers") {
  CHECK(ElectionSystem::plurality_rule(3).elect(votes({2, 2, 0})) == 2);
  CHECK(ElectionSystem::threshold_rule(0.75).elect(votes({0, 0, 1, 1})) == 1);
  CHECK(ElectionSystem::dictator_rule(1).elect(votes({0, 1, 0})) == 1);
  CHECK(ElectionSystem::prime_transitive_rule(2).elect(votes({1, 1, 0})) == 1);

  CHECK(ElectionSystem::plurality_rule(3).name() == "plurality");
  CHECK(ElectionSystem::dictator_rule(2).name() == "dictator:2");
  CHECK(ElectionSystem::prime_transitive_rule(3).name() == "prime-transitive");
  CHECK(ElectionSystem::threshold_rule(0.75).name().substr(0, 10) ==
        "threshold:");

  CHECK_THROWS_AS(ElectionSystem::plurality_rule(1), std::invalid_argument);
  CHECK_THROWS_AS(ElectionSystem::threshold_rule(0.3), std::invalid_argument);
  CHECK_THROWS_AS(ElectionSystem::dictator_rule(-2), std::invalid_argument);
}

TEST_CASE("fairness checker") {
  const VoteFn prime5 = [](std::span<const Opinion> x) {
    return elect_prime_transitive(x, 2);
  };
  const auto rep = check_fair(prime5, 2, 5, 1000000);
  CHECK(rep.exhaustive);
  CHECK(rep.checked == 64);  // 2^5 inputs x 2 relabelings
  CHECK(rep.ok());

  // the threshold rule favors 0 by construction
  const VoteFn thresh = [](std::span<const Opinion> x) {
    return elect_threshold(x, 0.75);
  };
  const auto bad = check_fair(thresh, 2, 5, 1000000);
  CHECK(bad.exhaustive);
  CHECK(bad.checked == 64);
  CHECK(bad.violation_count == 20);  // every profile with 2 or 3 supporters
  CHECK_FALSE(bad.ok());
  CHECK(bad.witnesses.size() == 5);
  CHECK(bad.witnesses[0].input.size() == 5);
  CHECK_FALSE(bad.witnesses[0].detail.empty());

  // sampled mode spends the budget in relabeling-sized chunks
  const auto sampled = check_fair(prime5, 2, 5, 50, 9);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.checked == 50);
  CHECK(sampled.ok());

  CHECK_THROWS_AS(check_fair(prime5, 2, 5, 0), std::invalid_argument);
}

TEST_CASE("monotonicity checker") {
  const VoteFn prime5 = [](std::span<const Opinion> x) {
    return elect_prime_transitive(x, 2);
  };
  const auto rep = check_monotone(prime5, 2, 5, 1000000);
  CHECK(rep.exhaustive);
  CHECK(rep.checked == 70);  // sum over profiles of 2^minority - 1
  CHECK(rep.ok());

  // parity is fair but wildly non-monotone
  const VoteFn parity = [](std::span<const Opinion> x) {
    int s = 0;
    for (Opinion a : x) s += a;
    return static_cast<Opinion>(s % 2);
  };
  CHECK(check_fair(parity, 2, 3, 1000000).ok());
  const auto bad = check_monotone(parity, 2, 3, 1000000);
  CHECK(bad.exhaustive);
  CHECK(bad.checked == 18);
  CHECK(bad.violation_count == 12);  // every odd-sized promotion
  CHECK(bad.witnesses.size() == 5);

  // sampled mode: one random promotion per drawn profile
  const auto sampled = check_monotone(prime5, 2, 11, 3000, 9);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.checked <= 3000);
  CHECK(sampled.checked >= 2900);  // all-0 / all-1 draws have nothing to move
  CHECK(sampled.ok());
}

TEST_CASE("shift invariance checker") {
  const VoteFn prime5 = [](std::span<const Opinion> x) {
    return elect_prime_transitive(x, 2);
  };
  const auto rep = check_transitive_shift(prime5, 2, 5, 1000000);
  CHECK(rep.exhaustive);
  CHECK(rep.checked == 128);  // 2^5 inputs x 4 nontrivial shifts
  CHECK(rep.ok());

  const VoteFn dict = [](std::span<const Opinion> x) {
    return elect_dictator(x, 0);
  };
  const auto bad = check_transitive_shift(dict, 2, 5, 1000000);
  CHECK(bad.exhaustive);
  CHECK(bad.checked == 128);
  CHECK(bad.violation_count == 64);  // shifts disagree whenever x_s != x_0
  CHECK_FALSE(bad.ok());

  const auto sampled = check_transitive_shift(prime5, 2, 11, 110, 9);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.checked == 100);  // 11 inputs were too many, so 10 x 10 shifts
  CHECK(sampled.ok());
}

TEST_CASE("vertex orbits by brute force") {
  const auto cycle = social_types_brute_force(make_cycle(5, false));
  CHECK(sorted_orbits(cycle) == std::vector<std::vector<int>>{{0, 1, 2, 3, 4}});
  CHECK(cycle.m == 5);

  const auto path = social_types_brute_force(
      Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}, false));
  CHECK(sorted_orbits(path) == std::vector<std::vector<int>>{{0, 2}, {1}});
  CHECK(path.m == 1);

  // equal weights keep the leaves interchangeable
  const auto star = social_types_brute_force(Graph::from_edges(
      4, {{0, 1, 2.0}, {0, 2, 2.0}, {0, 3, 2.0}}, true));
  CHECK(sorted_orbits(star) == std::vector<std::vector<int>>{{0}, {1, 2, 3}});

  // distinct weights split them
  const auto lopsided = social_types_brute_force(Graph::from_edges(
      4, {{0, 1, 2.0}, {0, 2, 2.0}, {0, 3, 5.0}}, true));
  CHECK(sorted_orbits(lopsided) ==
        std::vector<std::vector<int>>{{0}, {1, 2}, {3}});

  CHECK_THROWS_AS(social_types_brute_force(make_cycle(11, false)),
                  std::invalid_argument);
}

TEST_CASE("graph orbits agree between brute force and family formulas") {
  // n <= 10 goes through brute force even for known families
  CHECK(graph_social_types(make_cycle(8, false)).m == 8);
  CHECK(graph_social_types(make_complete(6)).m == 6);

  const Graph cx = make_counterexample(2.0 / 3.0, 1);
  const auto brute = social_types_brute_force(cx);
  CHECK(sorted_orbits(brute) ==
        std::vector<std::vector<int>>{{0, 1, 2}, {3, 4, 5, 6}, {7}, {8}});
  CHECK(graph_social_types(cx).m == 1);

  // past the brute-force limit the family formulas take over
  CHECK(graph_social_types(make_cycle(12, false)).m == 12);
  CHECK(graph_social_types(make_complete(11)).m == 11);
  const auto big = graph_social_types(make_counterexample(2.0 / 3.0, 2));
  CHECK(big.orbits.size() == 4);
  CHECK(big.m == 1);
  int covered = 0;
  for (const auto& o : big.orbits) covered += static_cast<int>(o.size());
  CHECK(covered == 13);

  CHECK_THROWS_AS(graph_social_types(make_random_regular(12, 4, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      graph_social_types(perturb_weights(make_cycle(12, false), 0.3, 5)),
      std::invalid_argument);
}

TEST_CASE("voter orbits of voting functions") {
  const VoteFn prime5 = [](std::span<const Opinion> x) {
    return elect_prime_transitive(x, 2);
  };
  const auto sym = function_social_types(prime5, 2, 5);
  CHECK(sorted_orbits(sym) == std::vector<std::vector<int>>{{0, 1, 2, 3, 4}});
  CHECK(sym.m == 5);

  const VoteFn dict = [](std::span<const Opinion> x) {
    return elect_dictator(x, 0);
  };
  const auto split = function_social_types(dict, 2, 3);
  CHECK(sorted_orbits(split) == std::vector<std::vector<int>>{{0}, {1, 2}});
  CHECK(split.m == 1);

  const VoteFn thresh = [](std::span<const Opinion> x) {
    return elect_threshold(x, 0.75);
  };
  CHECK(function_social_types(thresh, 2, 5).m == 5);

  CHECK_THROWS_AS(function_social_types(dict, 2, 7), std::invalid_argument);
  CHECK_THROWS_AS(function_social_types(dict, 4, 3), std::invalid_argument);
}
