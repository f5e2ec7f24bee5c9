#include "opdyn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "opdyn/errors.hpp"
#include "opdyn/rng.hpp"

namespace opdyn {

namespace {

constexpr int kDenseLimit = 5000;
constexpr double kIterTol = 1e-8;
constexpr int kIterMax = 20000;

void matvec(const Graph& g, const std::vector<double>& x, std::vector<double>& y) {
  const int n = g.vertex_count();
  for (int v = 0; v < n; ++v) {
    const auto row = g.neighbors(v);
    const auto w = g.edge_weights(v);
    double acc = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) acc += w[i] * x[row[i]];
    y[v] = acc;
  }
}

double norm(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Power iteration on M^2 (so the sign of the dominant eigenvalue does not
// matter), orthogonalized against already-found vectors. Returns |lambda|
// and the vector; throws numerical_error if the residual never reaches tol.
// A vector destined for the deflation set needs a tighter tol than the
// eigenvalue it certifies: its angle error becomes the residual floor of the
// next stage.
double power_abs_eigenvalue(const Graph& g,
                            const std::vector<std::vector<double>>& deflate,
                            std::uint64_t seed, double tol,
                            std::vector<double>& vec) {
  const int n = g.vertex_count();
  Rng rng(mix64(seed));
  std::vector<double> v(n), mv(n), m2v(n);
  for (auto& x : v) x = rng.next_double() - 0.5;

  auto orthogonalize = [&](std::vector<double>& x) {
    for (const auto& u : deflate) {
      const double c = dot(x, u);
      for (int i = 0; i < n; ++i) x[i] -= c * u[i];
    }
  };

  double residual = 0.0;
  for (int it = 0; it < kIterMax; ++it) {
    orthogonalize(v);
    const double nv = norm(v);
    if (nv == 0.0) throw numerical_error("power iteration started in the deflated span");
    for (auto& x : v) x /= nv;

    matvec(g, v, mv);
    matvec(g, mv, m2v);
    // residual of v as an eigenvector of M^2
    const double lam2 = dot(v, m2v);
    residual = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = m2v[i] - lam2 * v[i];
      residual += r * r;
    }
    residual = std::sqrt(residual) / std::max(1.0, std::abs(lam2));
    if (residual < tol) {
      vec = v;
      return std::sqrt(std::max(0.0, lam2));
    }
    v = m2v;
  }
  throw numerical_error("power iteration did not converge", residual);
}

}  // namespace

SpectralCertificate spectral_certificate(const Graph& g) {
  const int n = g.vertex_count();
  if (n < 2) throw std::invalid_argument("need at least two vertices");

  if (n <= kDenseLimit) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : g.edges()) {
      m(e.u, e.v) = e.w;
      m(e.v, e.u) = e.w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
      throw numerical_error("dense eigensolve failed");
    std::vector<double> abs_ev(n);
    for (int i = 0; i < n; ++i) abs_ev[i] = std::abs(solver.eigenvalues()[i]);
    std::sort(abs_ev.begin(), abs_ev.end(), std::greater<>());
    return {abs_ev[0], abs_ev[1], 1e-10 * std::max(1.0, abs_ev[0])};
  }

  std::vector<std::vector<double>> found;
  std::vector<double> vec;
  const double top =
      power_abs_eigenvalue(g, found, 0xe16e'0001, kIterTol * 1e-2, vec);
  found.push_back(vec);
  const double second =
      power_abs_eigenvalue(g, found, 0xe16e'0002, kIterTol, vec);
  return {top, second, kIterTol * std::max(1.0, top)};
}

MixingReport mixing_check(const Graph& g, const SpectralCertificate& cert,
                          int trials, std::uint64_t seed) {
  const auto d = g.regular_degree();
  if (!d || g.weighted())
    throw std::invalid_argument("mixing check needs an unweighted regular graph");
  if (trials < 1) throw std::invalid_argument("need at least one trial");

  const int n = g.vertex_count();
  Rng rng(mix64(seed ^ 0x7e67'1a12'5eed'0003ull));
  std::vector<int> perm(n);

  auto sample_subset = [&](std::vector<int>& out) {
    const auto size = static_cast<int>(rng.below(n + 1));
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = 0; i < size; ++i)
      std::swap(perm[i], perm[i + rng.below(n - i)]);
    out.assign(perm.begin(), perm.begin() + size);
  };

  MixingReport rep;
  rep.trials = trials;
  rep.max_slack = -1e300;
  std::vector<int> a, b;
  for (int t = 0; t < trials; ++t) {
    sample_subset(a);
    sample_subset(b);
    const double sizes = static_cast<double>(a.size()) * static_cast<double>(b.size());
    const double e = edge_mass(g, a, b);
    const double dev = std::abs(e - sizes * *d / n);
    const double allowance = (cert.lambda + cert.tol) * std::sqrt(sizes);
    const double slack = dev - allowance;
    if (slack > rep.max_slack) {
      rep.max_slack = slack;
      rep.worst_a = a;
      rep.worst_b = b;
    }
    if (slack > 0.0) ++rep.violations;
  }
  return rep;
}

}  // namespace opdyn
