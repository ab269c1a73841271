#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/landscape.hpp"
#include "core/stats.hpp"

using namespace lgcorr;

namespace {

struct PooledMoments {
  double mean;
  double variance;
  std::size_t count;
};

PooledMoments pool(const std::vector<double>& values) {
  const double mean = population_mean(values);
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  return {mean, sq / static_cast<double>(values.size() - 1), values.size()};
}

}  // namespace

TEST_CASE("iid sampling basics") {
  auto graph = std::make_shared<const Graph>(Graph::hypercube(4));

  SUBCASE("zero sigma gives exact zeros") {
    const Landscape ls = Landscape::sample_iid(graph, 1.0, 0.0, 0.0, 42);
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      CHECK(ls.barrier_from(edge.u, e) == 0.0);
      CHECK(ls.force_from(edge.u, e) == 0.0);
    }
    CHECK(population_variance(ls.wells()) > 0.0);
    CHECK(ls.symmetric_barriers());
    CHECK_FALSE(ls.has_forces());
  }

  SUBCASE("invalid parameters") {
    CHECK_THROWS_AS(Landscape::sample_iid(graph, 0.0, 1.0, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Landscape::sample_iid(graph, -1.0, 1.0, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Landscape::sample_iid(graph, 1.0, -0.5, 0.0, 1), InvalidArgument);
  }

  SUBCASE("fixed seed reproduces the landscape byte for byte") {
    const Landscape a = Landscape::sample_iid(graph, 1.0, 0.5, 0.25, 2024);
    const Landscape b = Landscape::sample_iid(graph, 1.0, 0.5, 0.25, 2024);
    CHECK(a.to_canonical_json() == b.to_canonical_json());
    const Landscape c = Landscape::sample_iid(graph, 1.0, 0.5, 0.25, 2025);
    CHECK(a.to_canonical_json() != c.to_canonical_json());
  }

  SUBCASE("force antisymmetry is exact") {
    const Landscape ls = Landscape::sample_iid(graph, 1.0, 0.5, 1.5, 7);
    CHECK(ls.has_forces());
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      CHECK(ls.force_from(edge.v, e) == -ls.force_from(edge.u, e));
    }
  }
}

TEST_CASE("iid sampling matches its law over pooled draws") {
  // >= 1e5 pooled draws for wells, barriers and forces.
  auto graph = std::make_shared<const Graph>(Graph::complete(64));  // 2016 edges
  const double sigma_w = 1.0, sigma_b = 0.7, sigma_f = 1.3;
  std::vector<double> wells, barriers, forces;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const Landscape ls = Landscape::sample_iid(graph, sigma_w, sigma_b, sigma_f, 500 + seed);
    wells.insert(wells.end(), ls.wells().begin(), ls.wells().end());
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      barriers.push_back(ls.barrier_from(edge.u, e));
      forces.push_back(ls.force_from(edge.u, e));
    }
  }
  REQUIRE(barriers.size() >= 100000);

  auto check_moments = [](const PooledMoments& m, double sigma) {
    const double n = static_cast<double>(m.count);
    const double se_mean = sigma / std::sqrt(n);
    const double se_var = sigma * sigma * std::sqrt(2.0 / (n - 1.0));
    CHECK(std::abs(m.mean - 0.0) <= 3.0 * se_mean);
    CHECK(std::abs(m.variance - sigma * sigma) <= 3.0 * se_var);
  };
  check_moments(pool(wells), sigma_w);
  check_moments(pool(barriers), sigma_b);
  check_moments(pool(forces), sigma_f);
}

TEST_CASE("rem sampling realizes the trap-dynamics coupling") {
  auto graph = std::make_shared<const Graph>(Graph::hypercube(5));

  SUBCASE("lambda = 1 removes the barriers") {
    const Landscape ls = Landscape::sample_rem(graph, 1.0, 1.0, 11);
    const RateMatrix rm = RateMatrix::build(ls);
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      CHECK(ls.barrier_from(edge.u, e) == 0.0);
      CHECK(rm.log_rate_from(edge.u, e) == ls.wells()[static_cast<std::size_t>(edge.u)]);
    }
  }

  SUBCASE("lambda = 0 rates depend on the destination only") {
    const Landscape ls = Landscape::sample_rem(graph, 0.0, 1.0, 12);
    const RateMatrix rm = RateMatrix::build(ls);
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      CHECK(rm.log_rate_from(edge.u, e) ==
            doctest::Approx(-ls.wells()[static_cast<std::size_t>(edge.v)]).epsilon(1e-15));
    }
  }

  SUBCASE("coupling identity at lambda = 0.5") {
    const Landscape ls = Landscape::sample_rem(graph, 0.5, 1.0, 13);
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      const double expected = 0.5 * (ls.wells()[static_cast<std::size_t>(edge.u)] +
                                     ls.wells()[static_cast<std::size_t>(edge.v)]);
      CHECK(ls.barrier_from(edge.u, e) == expected);
    }
  }

  SUBCASE("log-rate identity holds to machine precision on every edge") {
    for (double lambda : {0.0, 0.3, 0.5, 0.9, 1.0}) {
      const Landscape ls = Landscape::sample_rem(graph, lambda, 2.0, 17);
      const RateMatrix rm = RateMatrix::build(ls);
      for (EdgeId e = 0; e < graph->num_edges(); ++e) {
        const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
        const double wi = ls.wells()[static_cast<std::size_t>(edge.u)];
        const double wj = ls.wells()[static_cast<std::size_t>(edge.v)];
        CHECK(rm.log_rate_from(edge.u, e) ==
              doctest::Approx(lambda * wi - (1.0 - lambda) * wj).epsilon(1e-13));
        CHECK(rm.log_rate_from(edge.v, e) ==
              doctest::Approx(lambda * wj - (1.0 - lambda) * wi).epsilon(1e-13));
      }
    }
  }

  SUBCASE("invalid lambda") {
    CHECK_THROWS_AS(Landscape::sample_rem(graph, -0.1, 1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Landscape::sample_rem(graph, 1.1, 1.0, 1), InvalidArgument);
  }
}

TEST_CASE("separable sampling") {
  auto graph = std::make_shared<const Graph>(Graph::complete(40));  // 780 edges

  SUBCASE("trend-free separable matches the iid barrier law per orientation") {
    const double sigma = 0.8;
    std::vector<double> residuals;
    for (std::uint64_t seed = 0; seed < 80; ++seed) {
      const Landscape ls =
          Landscape::sample_separable(graph, 1.0, {0.0, 0.0, sigma}, false, 900 + seed);
      CHECK_FALSE(ls.symmetric_barriers());
      for (EdgeId e = 0; e < graph->num_edges(); ++e) {
        const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
        residuals.push_back(ls.barrier_from(edge.u, e));
        residuals.push_back(ls.barrier_from(edge.v, e));
      }
    }
    REQUIRE(residuals.size() >= 100000);
    const PooledMoments m = pool(residuals);
    const double n = static_cast<double>(m.count);
    CHECK(std::abs(m.mean) <= 3.0 * sigma / std::sqrt(n));
    CHECK(std::abs(m.variance - sigma * sigma) <=
          3.0 * sigma * sigma * std::sqrt(2.0 / (n - 1.0)));
  }

  SUBCASE("residuals around the affine trend have the configured variance") {
    const SeparableSpec spec{0.4, -0.2, 0.6};
    std::vector<double> residuals;
    for (std::uint64_t seed = 0; seed < 70; ++seed) {
      const Landscape ls = Landscape::sample_separable(graph, 1.0, spec, false, 37 + seed);
      for (EdgeId e = 0; e < graph->num_edges(); ++e) {
        const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
        const double zi = spec.slope * ls.wells()[static_cast<std::size_t>(edge.u)] + spec.intercept;
        const double zj = spec.slope * ls.wells()[static_cast<std::size_t>(edge.v)] + spec.intercept;
        residuals.push_back(ls.barrier_from(edge.u, e) - zi);
        residuals.push_back(ls.barrier_from(edge.v, e) - zj);
      }
    }
    REQUIRE(residuals.size() >= 100000);
    const PooledMoments m = pool(residuals);
    const double n = static_cast<double>(m.count);
    CHECK(std::abs(m.variance - spec.sigma * spec.sigma) <=
          3.0 * spec.sigma * spec.sigma * std::sqrt(2.0 / (n - 1.0)));
  }

  SUBCASE("rem barriers decompose through f(x) = (1 - lambda) x exactly") {
    const double lambda = 0.3;
    const Landscape rem = Landscape::sample_rem(graph, lambda, 1.0, 5);
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      const double residual = rem.barrier_from(edge.u, e) -
                              (1.0 - lambda) * rem.wells()[static_cast<std::size_t>(edge.u)];
      CHECK(residual == doctest::Approx((1.0 - lambda) *
                                        rem.wells()[static_cast<std::size_t>(edge.v)])
                            .epsilon(1e-13));
    }
  }

  SUBCASE("symmetrize averages the orientations") {
    const Landscape ls = Landscape::sample_separable(graph, 1.0, {0.1, 0.0, 0.5}, true, 8);
    CHECK(ls.symmetric_barriers());
    for (EdgeId e = 0; e < graph->num_edges(); ++e) {
      const Edge edge = graph->edges()[static_cast<std::size_t>(e)];
      CHECK(ls.barrier_from(edge.u, e) == ls.barrier_from(edge.v, e));
    }
  }

  SUBCASE("invalid residual sigma") {
    CHECK_THROWS_AS(Landscape::sample_separable(graph, 1.0, {0.0, 0.0, 0.0}, false, 1),
                    InvalidArgument);
  }
}

TEST_CASE("exit rate degeneracy check") {
  auto triangle = std::make_shared<const Graph>(Graph::complete(3));

  SUBCASE("distinct wells with zero barriers are nondegenerate") {
    const Landscape ls = Landscape::from_values(triangle, {0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}, {});
    CHECK(exit_rates_nondegenerate(ls));
  }

  SUBCASE("constant wells with zero barriers are degenerate") {
    const Landscape ls = Landscape::from_values(triangle, {0.7, 0.7, 0.7}, {0.0, 0.0, 0.0}, {});
    CHECK_FALSE(exit_rates_nondegenerate(ls));
  }

  SUBCASE("sampled trap landscapes are nondegenerate") {
    auto graph = std::make_shared<const Graph>(Graph::hypercube(6));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const Landscape ls = Landscape::sample_rem(graph, 0.5, 1.0, seed);
      CHECK(exit_rates_nondegenerate(ls));
    }
  }
}

TEST_CASE("canonical serialization round-trips") {
  auto graph = std::make_shared<const Graph>(Graph::cycle(5));
  const Landscape ls = Landscape::sample_iid(graph, 1.0, 0.5, 0.25, 31415);
  const std::string json_text = ls.to_canonical_json();
  CHECK(json_text.find("\"n\":5") != std::string::npos);
  CHECK(json_text.find("\"W\":[") != std::string::npos);
  CHECK(json_text.find("\"meta\":{") != std::string::npos);
  // shortest round-trip decimals: parsing back and re-serializing is stable
  CHECK(json_text == Landscape::sample_iid(graph, 1.0, 0.5, 0.25, 31415).to_canonical_json());
}

TEST_CASE("from_values validation") {
  auto graph = std::make_shared<const Graph>(Graph::cycle(4));
  CHECK_THROWS_AS(Landscape::from_values(graph, {0.0, 1.0}, {0.0, 0.0, 0.0, 0.0}, {}),
                  InvalidArgument);
  CHECK_THROWS_AS(Landscape::from_values(graph, {0.0, 1.0, 2.0, 3.0}, {0.0}, {}), InvalidArgument);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(
      Landscape::from_values(graph, {0.0, inf, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}, {}),
      InvalidArgument);
}
