#pragma once

#include <cstdint>
#include <vector>

#include "opdyn/graph.hpp"

namespace opdyn {

// Largest and second-largest absolute eigenvalues of the (weighted)
// adjacency matrix, with the tolerance the values are good to.
struct SpectralCertificate {
  double d = 0.0;       // top |eigenvalue|
  double lambda = 0.0;  // second |eigenvalue|
  double tol = 0.0;
  double ratio() const { return lambda / d; }
};

// Dense symmetric eigensolve for n <= 5000; power iteration on M^2 with
// deflation beyond that (tolerance 1e-8, throws numerical_error with the
// attained residual if it fails to converge).
SpectralCertificate spectral_certificate(const Graph& g);

struct MixingReport {
  int trials = 0;
  int violations = 0;
  // max over sampled pairs of |e(A,B) - |A||B|d/n| - lambda*sqrt(|A||B|),
  // after the eigensolve-tolerance allowance; negative values mean margin.
  double max_slack = 0.0;
  std::vector<int> worst_a, worst_b;
};

// Samples `trials` uniform random vertex-set pairs (A, B) and checks the
// expander mixing inequality against the certificate. Requires an
// unweighted regular graph.
MixingReport mixing_check(const Graph& g, const SpectralCertificate& cert,
                          int trials, std::uint64_t seed);

}  // namespace opdyn
