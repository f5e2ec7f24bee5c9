#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace opdyn {

// Role annotation for vertices of graphs built by make_counterexample.
struct VertexRole {
  enum Kind : std::uint8_t { group_a, clique_member, hub, isolated };
  Kind kind = group_a;
  int clique = -1;  // clique index for clique_member, -1 otherwise
};

// Immutable undirected graph with optional self-loops and optional positive
// edge weights. Vertices are 0..n-1. A self-loop counts once in degree(v)
// and contributes M_vv = w to the adjacency matrix. Storage is CSR plus the
// canonical (u <= v, lexicographically sorted) edge list.
class Graph {
public:
  struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
    bool operator==(const Edge&) const = default;
  };

  enum class Family : std::uint8_t { none, cycle, complete, counterexample };

  Graph() = default;

  // Edges may be given in any order and orientation; they are canonicalized.
  // Throws std::invalid_argument on out-of-range endpoints, nonpositive
  // weights, or duplicate edges.
  static Graph from_edges(int n, std::vector<Edge> edges, bool weighted);

  int vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool weighted() const { return weighted_; }

  int degree(int v) const {
    return static_cast<int>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_self_loop(int v) const;

  std::span<const std::int32_t> neighbors(int v) const {
    return {nbr_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }
  // Parallel to neighbors(v); all ones for unweighted graphs.
  std::span<const double> edge_weights(int v) const {
    return {wgt_.data() + offsets_[v],
            static_cast<std::size_t>(offsets_[v + 1] - offsets_[v])};
  }

  const std::vector<Edge>& edges() const { return edges_; }

  bool all_degrees_odd() const { return first_even_ < 0; }
  // -1 when every degree is odd.
  int first_even_degree_vertex() const { return first_even_; }

  // Common degree when the graph is regular, nullopt otherwise.
  std::optional<int> regular_degree() const;

  Family family() const { return family_; }
  const std::vector<VertexRole>& roles() const { return roles_; }

  // Copies family/role annotations from a graph with the same vertex set.
  // Used by transforms (weight perturbation, self-loop adjustment) that
  // preserve the construction the annotations describe.
  void inherit_metadata(const Graph& src);

  // Equality of vertex count, edge set and weights. Annotations are ignored.
  bool operator==(const Graph& other) const {
    return n_ == other.n_ && weighted_ == other.weighted_ &&
           edges_ == other.edges_;
  }

private:
  void set_family(Family f, std::vector<VertexRole> roles);

  int n_ = 0;
  bool weighted_ = false;
  std::vector<Edge> edges_;
  std::vector<std::int64_t> offsets_;
  std::vector<std::int32_t> nbr_;
  std::vector<double> wgt_;
  int first_even_ = -1;
  Family family_ = Family::none;
  std::vector<VertexRole> roles_;

  friend Graph make_cycle(int, bool);
  friend Graph make_complete(int);
  friend Graph make_counterexample(double, int);
};

// Cycle on n >= 3 vertices, optionally with a self-loop at every vertex
// (making all degrees odd).
Graph make_cycle(int n, bool with_self_loops);

// Complete graph on n >= 2 vertices, no self-loops.
Graph make_complete(int n);

// The dense-low-degree construction: k = 1/(1-p) group-A vertices joined to
// every member of n_cliques cliques of size k+1 (each clique vertex also
// carries a self-loop), a hub adjacent to all of A, and an isolated
// self-looped vertex if needed to make the total vertex count odd.
// p must lie in (1/2, 1) with 1/(1-p) an integer.
Graph make_counterexample(double p, int n_cliques);

// Uniform-ish simple d-regular graph via the pairing model with local
// 2-switch repair of self-loops and duplicate edges; restarts from a fresh
// pairing when repair stalls and throws construction_error after 1000
// restarts. Requires 1 <= d < n and n*d even.
Graph make_random_regular(int n, int d, std::uint64_t seed);

// Multiplies every weight by (1 + u), u uniform on (-epsilon, epsilon),
// independently per edge, and marks the result weighted. Requires
// 0 < epsilon < 1 so weights stay positive.
Graph perturb_weights(const Graph& g, double epsilon, std::uint64_t seed);

// Total weight of edges between vertex sets a and b:
// sum over u in a, v in b of M_uv (an ordered sum, so an edge with both
// endpoints in both sets counts twice, and self-loops count once).
double edge_mass(const Graph& g, std::span<const int> a, std::span<const int> b);

// Text format round-trip. See README for the format. load_graph throws
// parse_error with a 1-based line number on malformed input.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

}  // namespace opdyn
