#include <doctest.h>

#include <cmath>
#include <vector>

#include "opdyn/dynamics.hpp"
#include "opdyn/errors.hpp"
#include "opdyn/graph.hpp"
#include "opdyn/spectral.hpp"

using namespace opdyn;

namespace {

Graph petersen() {
  std::vector<Graph::Edge> edges;
  for (int i = 0; i < 5; ++i) {
    edges.push_back({i, (i + 1) % 5, 1.0});          // outer pentagon
    edges.push_back({i, i + 5, 1.0});                // spokes
    edges.push_back({5 + i, 5 + (i + 2) % 5, 1.0});  // inner pentagram
  }
  return Graph::from_edges(10, edges, false);
}

}  // namespace

TEST_CASE("dense certificates match known spectra") {
  SUBCASE("4-cycle: eigenvalues 2, 0, 0, -2") {
    const auto cert = spectral_certificate(make_cycle(4, false));
    CHECK(cert.d == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(cert.lambda == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(cert.ratio() == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("complete graph on 4: eigenvalues 3, -1, -1, -1") {
    const auto cert = spectral_certificate(make_complete(4));
    CHECK(cert.d == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(cert.lambda == doctest::Approx(1.0).epsilon(1e-8));
  }
  SUBCASE("5-cycle: second eigenvalue is the golden ratio") {
    const auto cert = spectral_certificate(make_cycle(5, false));
    CHECK(cert.d == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(cert.lambda == doctest::Approx(1.6180339887498949).epsilon(1e-8));
  }
  SUBCASE("petersen graph: 3, 1 (x5), -2 (x4)") {
    const auto cert = spectral_certificate(petersen());
    CHECK(cert.d == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(cert.lambda == doctest::Approx(2.0).epsilon(1e-8));
  }
  SUBCASE("weights scale the spectrum") {
    const auto cert =
        spectral_certificate(Graph::from_edges(2, {{0, 1, 3.5}}, true));
    CHECK(cert.d == doctest::Approx(3.5).epsilon(1e-10));
    CHECK(cert.lambda == doctest::Approx(3.5).epsilon(1e-10));
  }
  SUBCASE("self-looped complete graph has a spectral gap of everything") {
    // K_5 has even degrees, so tie-proofing adds a loop at every vertex and
    // the adjacency is the all-ones matrix: eigenvalues 5, 0, 0, 0, 0
    const auto cert = spectral_certificate(tie_proof(make_complete(5)));
    CHECK(cert.d == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(cert.lambda <= 1e-9);
    CHECK(cert.ratio() <= 3.0 / 16.0);
  }
  CHECK_THROWS_AS(spectral_certificate(Graph::from_edges(1, {}, false)),
                  std::invalid_argument);
}

TEST_CASE("power iteration handles graphs past the dense limit") {
  // triangle plus 4999 self-looped singletons: top |eigenvalue| 2, second 1
  std::vector<Graph::Edge> edges{{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  const int n = 5002;
  for (int v = 3; v < n; ++v) edges.push_back({v, v, 1.0});
  const auto cert = spectral_certificate(Graph::from_edges(n, edges, false));
  CHECK(cert.d == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(cert.lambda == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("power iteration reports a residual when the gap is too small") {
  // self-looped big cycle: top eigenvalues 3 and 3 - O(1/n^2), far too close
  try {
    spectral_certificate(make_cycle(5001, true));
    FAIL("expected numerical_error");
  } catch (const numerical_error& e) {
    CHECK(e.residual() > 1e-8);
  }
}

TEST_CASE("mixing inequality holds on a perfectly mixing graph") {
  const Graph g = tie_proof(make_complete(5));  // all-ones adjacency
  const auto cert = spectral_certificate(g);
  const auto rep = mixing_check(g, cert, 200, 5);
  CHECK(rep.trials == 200);
  CHECK(rep.violations == 0);
  CHECK(rep.max_slack <= 0.0);
}

TEST_CASE("mixing inequality holds on random regular graphs") {
  const Graph g = make_random_regular(100, 6, 3);
  const auto cert = spectral_certificate(g);
  REQUIRE(cert.d == doctest::Approx(6.0).epsilon(1e-9));
  const auto rep = mixing_check(g, cert, 500, 17);
  CHECK(rep.violations == 0);
  // the worst pair is recorded even when nothing is violated
  CHECK(rep.worst_a.size() <= 100);
  CHECK(rep.worst_b.size() <= 100);
}

TEST_CASE("mixing check rejects unsuitable graphs") {
  const Graph path = Graph::from_edges(3, {{0, 1, 1.0}, {1, 2, 1.0}}, false);
  SpectralCertificate cert{2.0, 1.0, 1e-10};
  CHECK_THROWS_AS(mixing_check(path, cert, 10, 1), std::invalid_argument);

  const Graph weighted = perturb_weights(make_cycle(6, false), 0.1, 1);
  CHECK_THROWS_AS(mixing_check(weighted, cert, 10, 1), std::invalid_argument);

  CHECK_THROWS_AS(mixing_check(make_cycle(6, false), cert, 0, 1),
                  std::invalid_argument);
}
