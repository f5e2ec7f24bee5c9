#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/graph.hpp"

namespace opdyn {

// Plurality winner over q alternatives; an exact top tie is a tie_error.
Opinion elect_plurality(std::span<const Opinion> x, int q);

// Binary supermajority: returns 1 iff at least (1 - alpha) * n voters hold 1,
// alpha in [1/2, 1). Input must be binary.
Opinion elect_threshold(std::span<const Opinion> x, double alpha);

// Voter `index` decides.
Opinion elect_dictator(std::span<const Opinion> x, int index);

// Tie-free plurality for prime n > q: on a strict plurality winner, return
// it; otherwise let Q be the set of tied leaders, M the voters who voted for
// some member of Q, k = |M|^{-1} * sum(M) mod n, and l >= 0 minimal with
// (k + l) mod n in M; the winner is voter (k + l)'s vote. Invariant to
// cyclic relabeling of voters and always a member of Q.
Opinion elect_prime_transitive(std::span<const Opinion> x, int q);

// One configured election rule.
struct ElectionSystem {
  enum class Kind : std::uint8_t {
    plurality,
    threshold,
    dictator,
    prime_transitive
  };

  Kind kind = Kind::plurality;
  int q = 2;
  double alpha = 0.5;      // threshold only
  int dictator_index = 0;  // dictator only

  static ElectionSystem plurality_rule(int q);
  static ElectionSystem threshold_rule(double alpha);
  static ElectionSystem dictator_rule(int index);
  static ElectionSystem prime_transitive_rule(int q);

  Opinion elect(std::span<const Opinion> x) const;
  std::string name() const;
};

using VoteFn = std::function<Opinion(std::span<const Opinion>)>;

// Outcome of a property check. Exhaustive when the full space fit in the
// budget, sampled otherwise. A few violating inputs are kept as witnesses.
struct CheckReport {
  std::string property;
  long long checked = 0;
  bool exhaustive = false;
  long long violation_count = 0;

  struct Violation {
    std::vector<Opinion> input;
    std::string detail;
  };
  std::vector<Violation> witnesses;  // at most 5

  bool ok() const { return violation_count == 0; }
};

// Anonymity under relabeling of alternatives: f(sigma(x)) = sigma(f(x)) for
// every permutation sigma of [q]. Exhaustive when q^n * q! <= budget.
CheckReport check_fair(const VoteFn& fn, int q, int n, long long budget,
                       std::uint64_t seed = 0);

// Monotonicity: moving any set of voters onto the current winner keeps it
// winning. Exhaustive when q^n * 2^n <= budget.
CheckReport check_monotone(const VoteFn& fn, int q, int n, long long budget,
                           std::uint64_t seed = 0);

// Invariance under cyclic voter shifts. Exhaustive when q^n * n <= budget.
CheckReport check_transitive_shift(const VoteFn& fn, int q, int n,
                                   long long budget, std::uint64_t seed = 0);

// Orbit partition of the vertex set. m is the size of the smallest class:
// the graph-dynamics analogue of "every voter class has at least m members".
struct SocialTypePartition {
  std::vector<std::vector<int>> orbits;
  int m = 0;
};

// Vertex orbits under the full automorphism group, found by checking all n!
// permutations. n <= 10.
SocialTypePartition social_types_brute_force(const Graph& g);

// Brute force for n <= 10; closed-form orbits for the cycle, complete and
// counterexample families beyond that; std::invalid_argument otherwise.
SocialTypePartition graph_social_types(const Graph& g);

// Voter orbits under the symmetry group of a voting function: permutations
// tau of voters with f(x o tau) = f(x) for all x. n <= 6 and q <= 3.
SocialTypePartition function_social_types(const VoteFn& fn, int q, int n);

}  // namespace opdyn
