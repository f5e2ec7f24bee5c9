#include "opdyn/voting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "opdyn/errors.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

namespace {

std::vector<std::int64_t> tally_votes(std::span<const Opinion> x, int q) {
  if (q < 2) throw std::invalid_argument("need q >= 2");
  if (x.empty()) throw std::invalid_argument("no voters");
  std::vector<std::int64_t> counts(q, 0);
  for (Opinion a : x) {
    if (a >= q) throw std::invalid_argument("vote out of range");
    ++counts[a];
  }
  return counts;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<std::int64_t>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// multiplicative inverse of a modulo prime n
int mod_inverse(int a, int n) {
  int t = 0, new_t = 1;
  int r = n, new_r = a % n;
  while (new_r != 0) {
    const int quotient = r / new_r;
    t -= quotient * new_t;
    std::swap(t, new_t);
    r -= quotient * new_r;
    std::swap(r, new_r);
  }
  if (r != 1) throw std::invalid_argument("not invertible");
  return ((t % n) + n) % n;
}

std::string profile_string(std::span<const Opinion> x) {
  std::ostringstream ss;
  ss << "(";
  for (std::size_t i = 0; i < x.size(); ++i)
    ss << (i ? "," : "") << static_cast<int>(x[i]);
  ss << ")";
  return ss.str();
}

}  // namespace

Opinion elect_plurality(std::span<const Opinion> x, int q) {
  const auto counts = tally_votes(x, q);
  int best = 0;
  bool tied = false;
  for (int a = 1; a < q; ++a) {
    if (counts[a] > counts[best]) {
      best = a;
      tied = false;
    } else if (counts[a] == counts[best]) {
      tied = true;
    }
  }
  if (tied) throw tie_error("plurality election tie");
  return static_cast<Opinion>(best);
}

Opinion elect_threshold(std::span<const Opinion> x, double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in [1/2, 1)");
  const auto counts = tally_votes(x, 2);
  const auto n = static_cast<double>(x.size());
  return counts[1] >= (1.0 - alpha) * n ? 1 : 0;
}

Opinion elect_dictator(std::span<const Opinion> x, int index) {
  if (index < 0 || index >= static_cast<int>(x.size()))
    throw std::invalid_argument("dictator index out of range");
  return x[index];
}

Opinion elect_prime_transitive(std::span<const Opinion> x, int q) {
  const int n = static_cast<int>(x.size());
  if (!is_prime(n)) throw std::invalid_argument("voter count must be prime");
  if (n <= q) throw std::invalid_argument("need more voters than alternatives");
  const auto counts = tally_votes(x, q);

  const auto top = *std::max_element(counts.begin(), counts.end());
  std::vector<char> leader(q, 0);
  int n_leaders = 0;
  Opinion single = 0;
  for (int a = 0; a < q; ++a)
    if (counts[a] == top) {
      leader[a] = 1;
      ++n_leaders;
      single = static_cast<Opinion>(a);
    }
  if (n_leaders == 1) return single;

  // voters who voted for a tied leader
  std::int64_t sum = 0;
  int m_size = 0;
  std::vector<char> in_m(n, 0);
  for (int i = 0; i < n; ++i)
    if (leader[x[i]]) {
      in_m[i] = 1;
      ++m_size;
      sum += i;
    }
  // 0 < m_size < n: covering all n voters would need t >= 2 tied leaders
  // with equal counts c and t * c = n, impossible for prime n with t <= q < n.
  // So m_size is invertible mod n.
  const int inv = mod_inverse(m_size % n, n);
  const int k = static_cast<int>((sum % n) * inv % n);
  for (int l = 0; l < n; ++l) {
    const int voter = (k + l) % n;
    if (in_m[voter]) return x[voter];
  }
  throw std::logic_error("tied leaders without supporters");
}

ElectionSystem ElectionSystem::plurality_rule(int q) {
  if (q < 2) throw std::invalid_argument("need q >= 2");
  ElectionSystem e;
  e.kind = Kind::plurality;
  e.q = q;
  return e;
}

ElectionSystem ElectionSystem::threshold_rule(double alpha) {
  if (!(alpha >= 0.5 && alpha < 1.0))
    throw std::invalid_argument("alpha must lie in [1/2, 1)");
  ElectionSystem e;
  e.kind = Kind::threshold;
  e.q = 2;
  e.alpha = alpha;
  return e;
}

ElectionSystem ElectionSystem::dictator_rule(int index) {
  if (index < 0) throw std::invalid_argument("dictator index must be nonnegative");
  ElectionSystem e;
  e.kind = Kind::dictator;
  e.dictator_index = index;
  return e;
}

ElectionSystem ElectionSystem::prime_transitive_rule(int q) {
  if (q < 2) throw std::invalid_argument("need q >= 2");
  ElectionSystem e;
  e.kind = Kind::prime_transitive;
  e.q = q;
  return e;
}

Opinion ElectionSystem::elect(std::span<const Opinion> x) const {
  switch (kind) {
    case Kind::plurality: return elect_plurality(x, q);
    case Kind::threshold: return elect_threshold(x, alpha);
    case Kind::dictator: return elect_dictator(x, dictator_index);
    case Kind::prime_transitive: return elect_prime_transitive(x, q);
  }
  throw std::logic_error("unknown election kind");
}

std::string ElectionSystem::name() const {
  switch (kind) {
    case Kind::plurality: return "plurality";
    case Kind::threshold: {
      std::ostringstream ss;
      ss << "threshold:" << alpha;
      return ss.str();
    }
    case Kind::dictator: return "dictator:" + std::to_string(dictator_index);
    case Kind::prime_transitive: return "prime-transitive";
  }
  return "?";
}

namespace {

constexpr int kMaxWitnesses = 5;

double pow_ll(int base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

long long factorial(int k) {
  long long r = 1;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

bool next_profile(std::vector<Opinion>& x, int q) {
  for (auto& a : x) {
    if (a + 1 < q) {
      ++a;
      return true;
    }
    a = 0;
  }
  return false;
}

void random_profile(std::vector<Opinion>& x, int q, Rng& rng) {
  for (auto& a : x) a = static_cast<Opinion>(rng.below(q));
}

void add_witness(CheckReport& rep, std::span<const Opinion> input,
                 std::string detail) {
  ++rep.violation_count;
  if (static_cast<int>(rep.witnesses.size()) < kMaxWitnesses)
    rep.witnesses.push_back({{input.begin(), input.end()}, std::move(detail)});
}

}  // namespace

CheckReport check_fair(const VoteFn& fn, int q, int n, long long budget,
                       std::uint64_t seed) {
  if (q < 2 || n < 1 || budget < 1) throw std::invalid_argument("bad check arguments");
  CheckReport rep;
  rep.property = "fair";

  std::vector<Opinion> sigma(q);
  std::iota(sigma.begin(), sigma.end(), 0);
  std::vector<std::vector<Opinion>> perms;
  do {
    perms.push_back(sigma);
  } while (std::next_permutation(sigma.begin(), sigma.end()));

  const double space = pow_ll(q, n) * static_cast<double>(perms.size());
  rep.exhaustive = space <= static_cast<double>(budget);

  std::vector<Opinion> x(n), sx(n);
  Rng rng(mix64(seed ^ 0xfa17'0001ull));
  const long long n_inputs =
      rep.exhaustive ? static_cast<long long>(pow_ll(q, n))
                     : std::max<long long>(1, budget / static_cast<long long>(perms.size()));

  std::fill(x.begin(), x.end(), 0);
  for (long long i = 0; i < n_inputs; ++i) {
    if (!rep.exhaustive) random_profile(x, q, rng);
    const Opinion y = fn(x);
    for (const auto& perm : perms) {
      for (int j = 0; j < n; ++j) sx[j] = perm[x[j]];
      const Opinion sy = fn(sx);
      ++rep.checked;
      if (sy != perm[y])
        add_witness(rep, x,
                    "relabeling " + profile_string(perm) + " maps winner " +
                        std::to_string(y) + " to " + std::to_string(perm[y]) +
                        " but elects " + std::to_string(sy));
    }
    if (rep.exhaustive && !next_profile(x, q)) break;
  }
  return rep;
}

CheckReport check_monotone(const VoteFn& fn, int q, int n, long long budget,
                           std::uint64_t seed) {
  if (q < 2 || n < 1 || budget < 1) throw std::invalid_argument("bad check arguments");
  CheckReport rep;
  rep.property = "monotone";

  const double space = pow_ll(q, n) * pow_ll(2, n);
  rep.exhaustive = space <= static_cast<double>(budget);

  std::vector<Opinion> x(n), xs(n);
  Rng rng(mix64(seed ^ 0xfa17'0002ull));

  auto check_promotions = [&](std::span<const Opinion> base, Opinion a) {
    // indices that can move toward a
    std::vector<int> movable;
    for (int i = 0; i < n; ++i)
      if (base[i] != a) movable.push_back(i);
    const int k = static_cast<int>(movable.size());
    if (rep.exhaustive) {
      for (std::uint64_t mask = 1; mask < (1ull << k); ++mask) {
        std::copy(base.begin(), base.end(), xs.begin());
        for (int b = 0; b < k; ++b)
          if (mask & (1ull << b)) xs[movable[b]] = a;
        ++rep.checked;
        if (fn(xs) != a)
          add_witness(rep, base,
                      "promoting " + std::to_string(std::popcount(mask)) +
                          " voters to winner " + std::to_string(a) +
                          " changes the outcome to " + std::to_string(fn(xs)));
      }
    } else if (k > 0) {
      std::copy(base.begin(), base.end(), xs.begin());
      for (int i : movable)
        if (rng.next() & 1) xs[i] = a;
      ++rep.checked;
      if (fn(xs) != a)
        add_witness(rep, base, "a promotion toward winner " + std::to_string(a) +
                                   " changed the outcome to " + std::to_string(fn(xs)));
    }
  };

  if (rep.exhaustive) {
    std::fill(x.begin(), x.end(), 0);
    do {
      check_promotions(x, fn(x));
    } while (next_profile(x, q));
  } else {
    for (long long i = 0; i < budget; ++i) {
      random_profile(x, q, rng);
      check_promotions(x, fn(x));
    }
  }
  return rep;
}

CheckReport check_transitive_shift(const VoteFn& fn, int q, int n,
                                   long long budget, std::uint64_t seed) {
  if (q < 2 || n < 1 || budget < 1) throw std::invalid_argument("bad check arguments");
  CheckReport rep;
  rep.property = "transitive-shift";

  const double space = pow_ll(q, n) * n;
  rep.exhaustive = space <= static_cast<double>(budget);

  std::vector<Opinion> x(n), xs(n);
  Rng rng(mix64(seed ^ 0xfa17'0003ull));
  const long long n_inputs = rep.exhaustive
                                 ? static_cast<long long>(pow_ll(q, n))
                                 : std::max<long long>(1, budget / n);

  std::fill(x.begin(), x.end(), 0);
  for (long long i = 0; i < n_inputs; ++i) {
    if (!rep.exhaustive) random_profile(x, q, rng);
    const Opinion y = fn(x);
    for (int s = 1; s < n; ++s) {
      for (int j = 0; j < n; ++j) xs[j] = x[(j + s) % n];
      ++rep.checked;
      const Opinion ys = fn(xs);
      if (ys != y)
        add_witness(rep, x, "shift by " + std::to_string(s) + " elects " +
                                std::to_string(ys) + " instead of " +
                                std::to_string(y));
    }
    if (rep.exhaustive && !next_profile(x, q)) break;
  }
  return rep;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

SocialTypePartition orbits_from(UnionFind& uf, int n) {
  SocialTypePartition part;
  std::vector<int> root_index(n, -1);
  for (int v = 0; v < n; ++v) {
    const int r = uf.find(v);
    if (root_index[r] < 0) {
      root_index[r] = static_cast<int>(part.orbits.size());
      part.orbits.emplace_back();
    }
    part.orbits[root_index[r]].push_back(v);
  }
  part.m = n;
  for (const auto& orbit : part.orbits)
    part.m = std::min(part.m, static_cast<int>(orbit.size()));
  return part;
}

}  // namespace

SocialTypePartition social_types_brute_force(const Graph& g) {
  const int n = g.vertex_count();
  if (n > 10) throw std::invalid_argument("brute force limited to n <= 10");

  std::vector<std::vector<double>> adj(n, std::vector<double>(n, 0.0));
  for (const auto& e : g.edges()) {
    adj[e.u][e.v] = e.w;
    adj[e.v][e.u] = e.w;
  }

  UnionFind uf(n);
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool automorphism = true;
    for (int u = 0; u < n && automorphism; ++u)
      for (int v = u; v < n; ++v)
        if (adj[u][v] != adj[p[u]][p[v]]) {
          automorphism = false;
          break;
        }
    if (automorphism)
      for (int v = 0; v < n; ++v) uf.unite(v, p[v]);
  } while (std::next_permutation(p.begin(), p.end()));
  return orbits_from(uf, n);
}

SocialTypePartition graph_social_types(const Graph& g) {
  const int n = g.vertex_count();
  if (n <= 10) return social_types_brute_force(g);

  // family orbits describe the unweighted construction; generic weights
  // break those symmetries
  if (g.weighted())
    throw std::invalid_argument("social types for weighted graphs need n <= 10");

  SocialTypePartition part;
  switch (g.family()) {
    case Graph::Family::cycle:
    case Graph::Family::complete: {
      part.orbits.emplace_back(n);
      std::iota(part.orbits[0].begin(), part.orbits[0].end(), 0);
      part.m = n;
      return part;
    }
    case Graph::Family::counterexample: {
      std::vector<int> a, b, hub, isolated;
      const auto& roles = g.roles();
      for (int v = 0; v < n; ++v) {
        switch (roles[v].kind) {
          case VertexRole::group_a: a.push_back(v); break;
          case VertexRole::clique_member: b.push_back(v); break;
          case VertexRole::hub: hub.push_back(v); break;
          case VertexRole::isolated: isolated.push_back(v); break;
        }
      }
      part.m = n;
      for (auto* cls : {&a, &b, &hub, &isolated})
        if (!cls->empty()) {
          part.m = std::min(part.m, static_cast<int>(cls->size()));
          part.orbits.push_back(std::move(*cls));
        }
      return part;
    }
    case Graph::Family::none:
      break;
  }
  throw std::invalid_argument(
      "social types need n <= 10 or a graph family with known symmetries");
}

SocialTypePartition function_social_types(const VoteFn& fn, int q, int n) {
  if (n > 6 || q > 3 || n < 1 || q < 2)
    throw std::invalid_argument("function symmetries limited to n <= 6, q <= 3");

  // cache f over all q^n profiles, indexed base-q
  const auto total = static_cast<std::size_t>(pow_ll(q, n));
  std::vector<Opinion> table(total);
  std::vector<Opinion> x(n, 0);
  std::size_t idx = 0;
  do {
    table[idx++] = fn(x);
  } while (next_profile(x, q));

  auto profile_index = [&](const std::vector<Opinion>& v) {
    std::size_t r = 0;
    for (int j = n - 1; j >= 0; --j) r = r * q + v[j];
    return r;
  };

  UnionFind uf(n);
  std::vector<int> tau(n);
  std::iota(tau.begin(), tau.end(), 0);
  std::vector<Opinion> permuted(n);
  do {
    bool symmetry = true;
    std::fill(x.begin(), x.end(), 0);
    std::size_t xi = 0;
    do {
      for (int j = 0; j < n; ++j) permuted[j] = x[tau[j]];
      if (table[profile_index(permuted)] != table[xi]) {
        symmetry = false;
        break;
      }
      ++xi;
    } while (next_profile(x, q));
    if (symmetry)
      for (int v = 0; v < n; ++v) uf.unite(v, tau[v]);
  } while (std::next_permutation(tau.begin(), tau.end()));
  return orbits_from(uf, n);
}

}  // namespace opdyn
