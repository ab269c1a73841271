#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "core/dynamics.hpp"
#include "core/errors.hpp"
#include "core/graph.hpp"
#include "core/landscape.hpp"
#include "core/stats.hpp"

using namespace lgcorr;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> out(n);
  for (double& v : out) v = normal(rng);
  return out;
}

}  // namespace

TEST_CASE("population variance on hand cases") {
  CHECK(population_variance(std::vector<double>{1.0, 1.0, 1.0}) == 0.0);
  CHECK(population_variance(std::vector<double>{0.0, 2.0}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(population_variance(std::vector<double>{1.0, 2.0, 3.0, 4.0}) ==
        doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("population variance is exactly zero for identical entries") {
  // log(10) is not exactly representable; repeated copies must still give 0.
  std::vector<double> x(1024, std::log(10.0));
  CHECK(population_variance(x) == 0.0);
}

TEST_CASE("pearson on hand cases") {
  std::vector<double> x{0.0, 1.0, 2.0};
  SUBCASE("affine increasing") {
    std::vector<double> y{7.0, 9.0, 11.0};  // y = 2x + 7
    CHECK(*pearson(x, y) == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("negation") {
    std::vector<double> y{0.0, -1.0, -2.0};
    CHECK(*pearson(x, y) == doctest::Approx(-1.0).epsilon(1e-14));
  }
  SUBCASE("orthogonal") {
    std::vector<double> y{0.0, 1.0, 0.0};
    CHECK(*pearson(x, y) == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("degenerate flagged, not silently returned") {
    std::vector<double> y{5.0, 5.0, 5.0};
    CHECK_FALSE(pearson(x, y).has_value());
  }
}

TEST_CASE("lse basics") {
  CHECK(lse(std::vector<double>{0.0, 0.0}) ==
        doctest::Approx(0.69314718055994531).epsilon(1e-15));
  CHECK(lse(std::vector<double>{1000.0, 1000.0}) ==
        doctest::Approx(1000.0 + 0.69314718055994531).epsilon(1e-15));
  CHECK(lse(std::vector<double>{-3.25}) == -3.25);  // singleton is exact
  CHECK_THROWS_AS(lse(std::vector<double>{}), InvalidArgument);
}

TEST_CASE("lse range, shift equivariance and Lipschitz property") {
  std::mt19937_64 rng(7121);
  for (std::size_t dim : {2u, 8u, 32u, 64u}) {
    for (int rep = 0; rep < 500; ++rep) {
      const std::vector<double> x = random_vector(rng, dim, 3.0);
      const std::vector<double> y = random_vector(rng, dim, 3.0);
      const double lx = lse(x);
      const double mx = *std::max_element(x.begin(), x.end());
      CHECK(lx >= mx);
      CHECK(lx <= mx + std::log(static_cast<double>(dim)));

      std::vector<double> shifted = x;
      for (double& v : shifted) v += 11.75;
      CHECK(lse(shifted) == doctest::Approx(lx + 11.75).epsilon(1e-12));

      double dist_sq = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dist_sq += (x[i] - y[i]) * (x[i] - y[i]);
      CHECK(std::abs(lx - lse(y)) <= std::sqrt(dist_sq) + 1e-12);
    }
  }
}

TEST_CASE("rho decomposition helper") {
  // With rho_hat = -r the decomposition collapses to sqrt(1 - r^2).
  for (double r : {0.0, 0.1, 0.25, 0.5, 0.75, 0.99}) {
    CHECK(rho_from_decomposition(-r, r) ==
          doctest::Approx(std::sqrt(1.0 - r * r)).epsilon(1e-12));
  }
  CHECK(rho_from_decomposition(0.0, 0.0) == 1.0);
}

TEST_CASE("rho report on the exact three-state oracle") {
  // Triangle, W = (0, 1, 2), B_01 = 0.5, B_02 = -0.5, B_12 = 0. Expected
  // values computed independently at 50-digit precision from
  // pi ~ exp(-W), q_i = sum_j exp(W_i - B_ij).
  auto graph = std::make_shared<const Graph>(Graph::complete(3));
  const Landscape ls = Landscape::from_values(graph, {0.0, 1.0, 2.0}, {0.5, -0.5, 0.0}, {});
  const RateMatrix rm = RateMatrix::build(ls);
  const StationaryResult st = stationary_reversible(ls);
  const std::vector<double> log_q = rm.exit_log_rates();
  const std::vector<double> a = barrier_functional(ls);
  const std::vector<double> wells(ls.wells().begin(), ls.wells().end());

  CHECK(log_q[0] == doctest::Approx(0.81326168751822283).epsilon(1e-14));
  CHECK(log_q[1] == doctest::Approx(1.47407698418010668).epsilon(1e-14));
  CHECK(log_q[2] == doctest::Approx(2.97407698418010668).epsilon(1e-14));

  const RhoReport rep = rho_report(st.neg_log_pi, log_q, wells, a, graph->degree(), true);
  CHECK(rep.rho == doctest::Approx(0.97577195246024721).epsilon(1e-12));
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.decomposition_gap <= 1e-10);
}

TEST_CASE("rho report in the barrier-free limit") {
  auto graph = std::make_shared<const Graph>(Graph::hypercube(5));
  const Landscape ls = Landscape::sample_iid(graph, 1.0, 0.0, 0.0, 99);
  const RateMatrix rm = RateMatrix::build(ls);
  const StationaryResult st = stationary_reversible(ls);
  const std::vector<double> log_q = rm.exit_log_rates();
  const std::vector<double> a = barrier_functional(ls);
  const std::vector<double> wells(ls.wells().begin(), ls.wells().end());

  const RhoReport rep = rho_report(st.neg_log_pi, log_q, wells, a, graph->degree(), true);
  CHECK(rep.r == 0.0);
  CHECK(rep.rho == 1.0);
  CHECK(rep.var_a == 0.0);
  CHECK_FALSE(rep.degenerate);
}

TEST_CASE("rho report decomposition identity on random reversible instances") {
  auto graph = std::make_shared<const Graph>(Graph::hypercube(6));
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Landscape ls = Landscape::sample_iid(graph, 1.0, 1.0, 0.0, 1000 + seed);
    const RateMatrix rm = RateMatrix::build(ls);
    const StationaryResult st = stationary_reversible(ls);
    const std::vector<double> log_q = rm.exit_log_rates();
    const std::vector<double> a = barrier_functional(ls);
    const std::vector<double> wells(ls.wells().begin(), ls.wells().end());
    const RhoReport rep = rho_report(st.neg_log_pi, log_q, wells, a, graph->degree(), true);
    CHECK(rep.decomposition_gap <= 1e-10);
    CHECK(rep.rho >= -1.0);
    CHECK(rep.rho <= 1.0);
  }
}

TEST_CASE("rho invariance under constant well shifts") {
  auto graph = std::make_shared<const Graph>(Graph::hypercube(5));
  const Landscape ls = Landscape::sample_iid(graph, 1.0, 1.0, 0.0, 4242);
  auto report_for = [&](double shift) {
    std::vector<double> wells(ls.wells().begin(), ls.wells().end());
    std::vector<double> barriers;
    for (EdgeId e = 0; e < graph->num_edges(); ++e)
      barriers.push_back(ls.barrier_from(graph->edges()[static_cast<std::size_t>(e)].u, e));
    for (double& w : wells) w += shift;
    const Landscape shifted = Landscape::from_values(graph, wells, barriers, {});
    const RateMatrix rm = RateMatrix::build(shifted);
    const StationaryResult st = stationary_reversible(shifted);
    const std::vector<double> log_q = rm.exit_log_rates();
    const std::vector<double> a = barrier_functional(shifted);
    const std::vector<double> w(shifted.wells().begin(), shifted.wells().end());
    return rho_report(st.neg_log_pi, log_q, w, a, graph->degree(), true);
  };
  const RhoReport base = report_for(0.0);
  const RhoReport shifted = report_for(17.0);
  CHECK(std::abs(base.rho - shifted.rho) <= 1e-12);
}

TEST_CASE("degenerate inputs flag the report") {
  auto graph = std::make_shared<const Graph>(Graph::cycle(4));
  const std::vector<double> constant(4, 0.5);
  const std::vector<double> wells{0.5, 0.5, 0.5, 0.5};
  const RhoReport rep = rho_report(constant, constant, wells, constant, 2, false);
  CHECK(rep.degenerate);
  CHECK(std::isnan(rep.rho));
}

TEST_CASE("finite-n coefficient and correlation lower bounds") {
  CHECK_THROWS_AS(finite_n_coefficient(5), InvalidArgument);
  CHECK(finite_n_coefficient(1024) == doctest::Approx(6.6177947689506939).epsilon(1e-14));

  SUBCASE("disorder ratio bound") {
    const BoundEvaluation ev = disorder_bound(1024, 0.1, 1.0);
    CHECK(ev.rho_lower_bound == doctest::Approx(0.86764410462098612).epsilon(1e-13));
    CHECK(ev.asymptotic_coefficient == 8.0);
    CHECK(disorder_bound(1024, 4.0, 1.0).rho_lower_bound < 0.0);  // vacuous but defined
    CHECK_THROWS_AS(disorder_bound(4, 0.1, 1.0), InvalidArgument);
    // asymptotic coefficient: 2 c_r(n) = 8 + O(n^{-1/2}), tail 4 sqrt(1720) / sqrt(n)
    CHECK(2.0 * finite_n_coefficient(100000000) == doctest::Approx(8.0).epsilon(3e-3));
    CHECK(std::sqrt(1e8) * (2.0 * finite_n_coefficient(100000000) - 8.0) ==
          doctest::Approx(165.8939399).epsilon(1e-6));
  }

  SUBCASE("disorder bound nondecreasing in n at fixed ratio") {
    double prev = disorder_bound(6, 0.1, 1.0).rho_lower_bound;
    for (std::int32_t n = 7; n <= 4000; ++n) {
      const double cur = disorder_bound(n, 0.1, 1.0).rho_lower_bound;
      CHECK(cur >= prev - 1e-15);
      prev = cur;
    }
  }

  SUBCASE("locality bound") {
    CHECK(locality_bound(1024, 1.0).rho_lower_bound == 1.0);
    const BoundEvaluation ev = locality_bound(1024, 0.9);
    CHECK(ev.rho_lower_bound == doctest::Approx(0.73528820924197224).epsilon(1e-12));
    CHECK(ev.asymptotic_coefficient == 16.0);
    CHECK_THROWS_AS(locality_bound(1024, 1.5), InvalidArgument);
    CHECK_THROWS_AS(locality_bound(1024, -0.1), InvalidArgument);
    CHECK(4.0 * finite_n_coefficient(100000000) == doctest::Approx(16.0).epsilon(3e-3));
  }
}

TEST_CASE("inverse variance moments") {
  const InverseVarianceMoments m6 = inverse_variance_moments(6, 1.0);
  CHECK(m6.mean == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(m6.variance == doctest::Approx(8.0).epsilon(1e-15));

  const InverseVarianceMoments m10 = inverse_variance_moments(10, 1.0);
  CHECK(m10.mean == doctest::Approx(10.0 / 7.0).epsilon(1e-15));
  CHECK(m10.variance == doctest::Approx(40.0 / 49.0).epsilon(1e-15));

  const InverseVarianceMoments scaled = inverse_variance_moments(10, 2.0);
  CHECK(scaled.mean == doctest::Approx(m10.mean / 4.0).epsilon(1e-15));
  CHECK(scaled.variance == doctest::Approx(m10.variance / 16.0).epsilon(1e-15));

  CHECK_THROWS_AS(inverse_variance_moments(5, 1.0), InvalidArgument);
}

TEST_CASE("central moment bound") {
  CHECK(central_moment_bound(2, 1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(central_moment_bound(2, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(central_moment_bound(4, 1.0) == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(central_moment_bound(4, 2.0) == doctest::Approx(256.0).epsilon(1e-14));
  CHECK(central_moment_bound(1, 1.0) ==
        doctest::Approx(2.5066282746310005).epsilon(1e-14));  // sqrt(2 pi)
  CHECK_THROWS_AS(central_moment_bound(0, 1.0), InvalidArgument);
}

TEST_CASE("empirical moment suite") {
  const Graph graph = Graph::hypercube(6);

  SUBCASE("argument validation") {
    CHECK_THROWS_AS(empirical_moment_suite(graph, 1.0, 1.0, 1, 0), InvalidArgument);
  }

  SUBCASE("vanishing barriers drive Var A to zero") {
    const MomentSuiteReport rep = empirical_moment_suite(graph, 1.0, 0.0, 1000, 3);
    CHECK(rep.checks[0].estimate == 0.0);
    CHECK(rep.checks[1].estimate == 0.0);
    CHECK(rep.all_pass);
  }

  SUBCASE("moment formulas hold within 3 standard errors") {
    const MomentSuiteReport rep = empirical_moment_suite(graph, 1.0, 1.0, 4000, 11);
    REQUIRE(rep.checks.size() == 4);
    for (const MomentCheck& c : rep.checks) {
      INFO(c.name, ": estimate ", c.estimate, " bound ", c.bound, " se ", c.std_error);
      CHECK(c.pass);
    }
    CHECK(rep.all_pass);
  }
}
