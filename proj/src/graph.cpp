#include "opdyn/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "opdyn/errors.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

namespace {

std::uint64_t edge_key(int u, int v) {
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

}  // namespace

Graph Graph::from_edges(int n, std::vector<Edge> edges, bool weighted) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");

  for (auto& e : edges) {
    if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (!(e.w > 0.0))
      throw std::invalid_argument("edge weights must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
      throw std::invalid_argument("duplicate edge " + std::to_string(edges[i].u) +
                                  "-" + std::to_string(edges[i].v));

  Graph g;
  g.n_ = n;
  g.weighted_ = weighted;
  g.edges_ = std::move(edges);

  std::vector<std::int64_t> deg(n, 0);
  for (const auto& e : g.edges_) {
    ++deg[e.u];
    if (e.v != e.u) ++deg[e.v];
  }
  g.offsets_.assign(n + 1, 0);
  std::partial_sum(deg.begin(), deg.end(), g.offsets_.begin() + 1);

  const auto total = g.offsets_[n];
  g.nbr_.resize(total);
  g.wgt_.resize(total);
  std::vector<std::int64_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const auto& e : g.edges_) {
    g.nbr_[fill[e.u]] = e.v;
    g.wgt_[fill[e.u]++] = e.w;
    if (e.v != e.u) {
      g.nbr_[fill[e.v]] = e.u;
      g.wgt_[fill[e.v]++] = e.w;
    }
  }
  // sort each adjacency row (neighbor, weight) by neighbor id
  for (int v = 0; v < n; ++v) {
    const auto lo = g.offsets_[v], hi = g.offsets_[v + 1];
    std::vector<std::pair<std::int32_t, double>> row;
    row.reserve(hi - lo);
    for (auto i = lo; i < hi; ++i) row.emplace_back(g.nbr_[i], g.wgt_[i]);
    std::sort(row.begin(), row.end());
    for (auto i = lo; i < hi; ++i) {
      g.nbr_[i] = row[i - lo].first;
      g.wgt_[i] = row[i - lo].second;
    }
  }

  g.first_even_ = -1;
  for (int v = 0; v < n; ++v)
    if (deg[v] % 2 == 0) {
      g.first_even_ = v;
      break;
    }
  return g;
}

bool Graph::has_self_loop(int v) const {
  const auto row = neighbors(v);
  return std::binary_search(row.begin(), row.end(), v);
}

std::optional<int> Graph::regular_degree() const {
  if (n_ == 0) return std::nullopt;
  const int d = degree(0);
  for (int v = 1; v < n_; ++v)
    if (degree(v) != d) return std::nullopt;
  return d;
}

void Graph::inherit_metadata(const Graph& src) {
  if (src.n_ != n_)
    throw std::invalid_argument("metadata source has a different vertex count");
  family_ = src.family_;
  roles_ = src.roles_;
}

void Graph::set_family(Family f, std::vector<VertexRole> roles) {
  family_ = f;
  roles_ = std::move(roles);
}

Graph make_cycle(int n, bool with_self_loops) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Graph::Edge> edges;
  edges.reserve(with_self_loops ? 2 * n : n);
  for (int v = 0; v < n; ++v) {
    edges.push_back({v, (v + 1) % n, 1.0});
    if (with_self_loops) edges.push_back({v, v, 1.0});
  }
  Graph g = Graph::from_edges(n, std::move(edges), false);
  g.set_family(Graph::Family::cycle, {});
  return g;
}

Graph make_complete(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs n >= 2");
  std::vector<Graph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, 1.0});
  Graph g = Graph::from_edges(n, std::move(edges), false);
  g.set_family(Graph::Family::complete, {});
  return g;
}

Graph make_counterexample(double p, int n_cliques) {
  if (!(p > 0.5 && p < 1.0))
    throw std::invalid_argument("p must lie in (1/2, 1)");
  if (n_cliques < 1) throw std::invalid_argument("need at least one clique");
  const double inv = 1.0 / (1.0 - p);
  const int k = static_cast<int>(std::llround(inv));
  if (std::abs(inv - k) > 1e-9)
    throw std::invalid_argument("1/(1-p) must be an integer");

  const int clique_size = k + 1;
  int n = k + n_cliques * clique_size + 1;  // A, cliques, hub
  const bool pad_odd = (n % 2 == 0);
  if (pad_odd) ++n;

  std::vector<VertexRole> roles(n);
  std::vector<Graph::Edge> edges;
  // A vertices: 0..k-1
  for (int a = 0; a < k; ++a) roles[a] = {VertexRole::group_a, -1};
  // cliques: k .. k + n_cliques*clique_size - 1
  int next = k;
  for (int c = 0; c < n_cliques; ++c) {
    const int base = next;
    for (int i = 0; i < clique_size; ++i) {
      const int v = base + i;
      roles[v] = {VertexRole::clique_member, c};
      edges.push_back({v, v, 1.0});
      for (int j = i + 1; j < clique_size; ++j)
        edges.push_back({v, base + j, 1.0});
      for (int a = 0; a < k; ++a) edges.push_back({a, v, 1.0});
    }
    next += clique_size;
  }
  const int hub = next;
  roles[hub] = {VertexRole::hub, -1};
  for (int a = 0; a < k; ++a) edges.push_back({a, hub, 1.0});
  if (pad_odd) {
    roles[n - 1] = {VertexRole::isolated, -1};
    edges.push_back({n - 1, n - 1, 1.0});
  }

  Graph g = Graph::from_edges(n, std::move(edges), false);
  g.set_family(Graph::Family::counterexample, std::move(roles));
  return g;
}

namespace {

// One pass of 2-switches trying to clear self-loops and duplicate pairs.
// pairs are stub pairings; cnt tracks multiplicity of each vertex pair.
struct PairingRepair {
  std::vector<std::pair<int, int>>& pairs;
  std::unordered_map<std::uint64_t, int>& cnt;

  static std::uint64_t key(const std::pair<int, int>& e) {
    return edge_key(std::min(e.first, e.second), std::max(e.first, e.second));
  }
  bool bad(const std::pair<int, int>& e) const {
    return e.first == e.second || cnt.at(key(e)) > 1;
  }

  bool try_switch(std::size_t i, std::size_t j) {
    if (i == j) return false;
    auto a = pairs[i], b = pairs[j];
    const std::pair<int, int> na{a.first, b.second}, nb{b.first, a.second};
    if (na.first == na.second || nb.first == nb.second) return false;
    --cnt[key(a)];
    --cnt[key(b)];
    const int ca = ++cnt[key(na)];
    const int cb = ++cnt[key(nb)];
    if (ca > 1 || cb > 1) {
      --cnt[key(na)];
      --cnt[key(nb)];
      ++cnt[key(a)];
      ++cnt[key(b)];
      return false;
    }
    pairs[i] = na;
    pairs[j] = nb;
    return true;
  }
};

}  // namespace

Graph make_random_regular(int n, int d, std::uint64_t seed) {
  if (n < 2 || d < 1 || d >= n)
    throw std::invalid_argument("need 1 <= d < n");
  if (static_cast<std::int64_t>(n) * d % 2 != 0)
    throw std::invalid_argument("n * d must be even");

  Rng rng(mix64(seed ^ 0x7e67'1a12'5eed'0001ull));
  std::vector<int> stubs(static_cast<std::size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs[static_cast<std::size_t>(v) * d + i] = v;
  const std::size_t m = stubs.size() / 2;

  for (int restart = 0; restart < 1000; ++restart) {
    for (std::size_t i = stubs.size() - 1; i > 0; --i)
      std::swap(stubs[i], stubs[rng.below(i + 1)]);

    std::vector<std::pair<int, int>> pairs(m);
    std::unordered_map<std::uint64_t, int> cnt;
    cnt.reserve(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      pairs[i] = {stubs[2 * i], stubs[2 * i + 1]};
      ++cnt[PairingRepair::key(pairs[i])];
    }
    PairingRepair rep{pairs, cnt};

    bool clean = false;
    for (int sweep = 0; sweep < 200 && !clean; ++sweep) {
      clean = true;
      for (std::size_t i = 0; i < m; ++i) {
        if (!rep.bad(pairs[i])) continue;
        bool fixed = false;
        for (int attempt = 0; attempt < 50 && !fixed; ++attempt)
          fixed = rep.try_switch(i, rng.below(m));
        if (!fixed) clean = false;
      }
      if (!clean) continue;
      for (std::size_t i = 0; i < m && clean; ++i)
        if (rep.bad(pairs[i])) clean = false;
    }
    if (!clean) continue;

    std::vector<Graph::Edge> edges;
    edges.reserve(m);
    for (const auto& [u, v] : pairs) edges.push_back({u, v, 1.0});
    return Graph::from_edges(n, std::move(edges), false);
  }
  throw construction_error("random regular pairing failed after 1000 restarts");
}

Graph perturb_weights(const Graph& g, double epsilon, std::uint64_t seed) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1)");
  Rng rng(mix64(seed ^ 0x7e67'1a12'5eed'0002ull));
  std::vector<Graph::Edge> edges = g.edges();
  for (auto& e : edges) {
    double u;
    do {
      u = (2.0 * rng.next_double() - 1.0) * epsilon;
    } while (u <= -epsilon);
    e.w *= 1.0 + u;
  }
  Graph out = Graph::from_edges(g.vertex_count(), std::move(edges), true);
  out.inherit_metadata(g);
  return out;
}

double edge_mass(const Graph& g, std::span<const int> a, std::span<const int> b) {
  const int n = g.vertex_count();
  std::vector<char> in_b(n, 0);
  for (int v : b) {
    if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
    in_b[v] = 1;
  }
  double total = 0.0;
  for (int u : a) {
    if (u < 0 || u >= n) throw std::invalid_argument("vertex out of range");
    const auto row = g.neighbors(u);
    const auto w = g.edge_weights(u);
    for (std::size_t i = 0; i < row.size(); ++i)
      if (in_b[row[i]]) total += w[i];
  }
  return total;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open " + path, 0);

  int line_no = 0;
  std::string line;
  int n = -1;
  bool weighted = false;
  std::vector<Graph::Edge> edges;
  std::unordered_map<std::uint64_t, int> seen;  // key -> first line
  bool header_done = false;

  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    if (!header_done) {
      std::string kw_n, kw_w;
      int wflag = -1;
      if (!(ss >> kw_n)) continue;  // blank or comment-only line
      if (kw_n != "n" || !(ss >> n) || !(ss >> kw_w) || kw_w != "weighted" ||
          !(ss >> wflag) || (wflag != 0 && wflag != 1))
        throw parse_error("expected header 'n <count> weighted <0|1>'", line_no);
      std::string extra;
      if (ss >> extra) throw parse_error("trailing tokens after header", line_no);
      if (n < 1) throw parse_error("vertex count must be positive", line_no);
      weighted = wflag == 1;
      header_done = true;
      continue;
    }
    int u, v;
    if (!(ss >> u)) {
      ss.clear();
      std::string tok;
      if (ss >> tok) throw parse_error("expected a vertex id", line_no);
      continue;  // blank or comment-only line
    }
    if (!(ss >> v)) throw parse_error("edge needs two endpoints", line_no);
    double w = 1.0;
    if (weighted) {
      if (!(ss >> w)) throw parse_error("weighted graph edge needs a weight", line_no);
      if (!(w > 0.0)) throw parse_error("edge weight must be positive", line_no);
    }
    std::string extra;
    if (ss >> extra) throw parse_error("trailing tokens after edge", line_no);
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw parse_error("edge endpoint out of range", line_no);
    if (u > v)
      throw parse_error("edges must be written u v with u <= v", line_no);
    const auto key = edge_key(u, v);
    if (auto it = seen.find(key); it != seen.end())
      throw parse_error("edge repeats line " + std::to_string(it->second), line_no);
    seen.emplace(key, line_no);
    edges.push_back({u, v, w});
  }
  if (!header_done) throw parse_error("missing header", line_no);
  return Graph::from_edges(n, std::move(edges), weighted);
}

void save_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << "n " << g.vertex_count() << " weighted " << (g.weighted() ? 1 : 0)
      << "\n";
  char buf[64];
  for (const auto& e : g.edges()) {
    if (g.weighted()) {
      // round-trip exact weights
      std::snprintf(buf, sizeof buf, "%d %d %.17g", e.u, e.v, e.w);
      out << buf << "\n";
    } else {
      out << e.u << " " << e.v << "\n";
    }
  }
  if (!out) throw std::invalid_argument("write failed for " + path);
}

}  // namespace opdyn
