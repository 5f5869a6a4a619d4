// SPDX-License-Identifier: Apache-2.0
#include "crdra/dra.hpp"
#include "crdra/errors.hpp"
#include "crdra/mac.hpp"
#include "crdra/scenario.hpp"
#include "crdra/oracles/algebra.hpp"
#include "crdra/oracles/search.hpp"

#include "doctest.h"

#include <cmath>

using namespace crdra;
namespace orc = crdra::oracles;

namespace {

FadingScenario scenario(std::uint64_t seed, Index bs, std::vector<Index> tx, std::vector<Index> pus, std::size_t dims,
                        std::vector<double> power, std::vector<double> gamma) {
  FadingProcess f;
  f.seed = seed;
  f.dimensions = dims;
  return FadingScenario::generate(Topology::mac(bs, std::move(tx), std::move(pus)), f, std::move(power),
                                  std::move(gamma));
}

std::vector<double> gains(const FadingScenario& s, std::size_t user) {
  std::vector<double> g;
  for (const auto& d : s.dimensions) g.push_back(std::norm(d.direct[user](0, 0)));
  return g;
}

DualPair pair(std::vector<double> nu, std::vector<double> delta) {
  DualPair p;
  p.nu = Eigen::Map<const RealVector>(nu.data(), static_cast<Index>(nu.size()));
  p.delta = Eigen::Map<const RealVector>(delta.data(), static_cast<Index>(delta.size()));
  return p;
}

}  // namespace

TEST_CASE("one dimension is the static MAC problem") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    FadingScenario s = scenario(seed, 2, {2, 1}, {1}, 1, {1.0, 2.0}, {0.3});
    s.weights = {1.0, 0.6};
    MacProblem m = MacProblem::from_instance(s.dimensions[0], {1.0, 2.0}, {0.3});
    m.weights = s.weights;
    const DraResult fading = solve_dra(s, DraUtility::MacWsr);
    CHECK(std::abs(fading.report.objective - solve_mac_wsr(m).objective) <= 1e-4);
  }
}

TEST_CASE("a single scalar user gets ergodic water-filling") {
  const FadingScenario s = scenario(4, 1, {1}, {}, 16, {2.0}, {});
  const double exact = orc::ergodic_water_filling(gains(s, 0), 2.0);
  CHECK(std::abs(solve_dra(s, DraUtility::MacWsr).report.objective - exact) <= 1e-4);
  CHECK(std::abs(solve_dra(s, DraUtility::TdmaSumRate).report.objective - exact) <= 1e-4);
}

TEST_CASE("two scalar users match the nested grid") {
  FadingScenario s = scenario(5, 1, {1, 1}, {}, 4, {1.0, 0.5}, {});
  s.weights = {1.0, 0.5};
  const DraResult r = solve_dra(s, DraUtility::MacWsr);
  const double grid = orc::fading_mac_nested_grid(gains(s, 0), gains(s, 1), 1.0, 0.5, 1.0, 0.5, 16, 30);
  CHECK(std::abs(r.report.objective - grid) <= 1e-2);
}

TEST_CASE("TDMA per-dimension choice") {
  FadingProcess f;
  f.seed = 6;
  NetworkInstance d = generate_instance(Topology::mac(1, {1, 1}, {1}), f);

  SUBCASE("matches the penalized scalar rate") {
    const DualPair m = pair({0.05, 0.08}, {0.1});
    const TdmaChoice c = tdma_subproblem(d, m);
    for (std::size_t k = 0; k < 2; ++k) {
      const double price = m.nu(static_cast<Index>(k)) + 0.1 * std::norm(d.pu_channel(k, 0)(0, 0));
      CHECK(c.values(static_cast<Index>(k)) ==
            doctest::Approx(orc::penalized_scalar_rate(std::norm(d.direct[k](0, 0)), price)).epsilon(1e-9));
    }
    const Index best = c.values(0) >= c.values(1) ? 0 : 1;
    REQUIRE(c.user.has_value());
    CHECK(*c.user == static_cast<std::size_t>(best));
    CHECK(c.value == doctest::Approx(c.values(best)));
  }
  SUBCASE("ties go to the lower index") {
    d.direct[0](0, 0) = 1.5;
    d.direct[1] = d.direct[0];
    d.pu[1] = d.pu[0];
    const TdmaChoice c = tdma_subproblem(d, pair({0.1, 0.1}, {0.2}));
    REQUIRE(c.user.has_value());
    CHECK(*c.user == 0);
  }
  SUBCASE("a silent user is never picked") {
    d.direct[0].setZero();
    d.direct[1](0, 0) = 1.0;
    const TdmaChoice c = tdma_subproblem(d, pair({1e-3, 1.0}, {0.0}));
    REQUIRE(c.user.has_value());
    CHECK(*c.user == 1);
    CHECK(c.values(0) == 0.0);
  }
  SUBCASE("prohibitive prices leave the dimension empty") {
    const TdmaChoice c = tdma_subproblem(d, pair({1e6, 1e6}, {0.0}));
    CHECK_FALSE(c.user.has_value());
    CHECK(c.value == 0.0);
  }
  SUBCASE("bad multipliers") {
    CHECK_THROWS_AS(tdma_subproblem(d, pair({0.1}, {0.1})), DomainError);
    CHECK_THROWS_AS(tdma_subproblem(d, pair({0.1, -0.1}, {0.1})), DomainError);
  }
}

TEST_CASE("penalty matrix") {
  FadingProcess f;
  f.seed = 7;
  const NetworkInstance d = generate_instance(Topology::mac(2, {2, 1}, {1, 2}), f);
  const Matrix b = penalty_matrix(d, pair({0.5, 1.0}, {2.0, 0.25}), 0);
  const auto& g1 = d.pu_channel(0, 0);
  const auto& g2 = d.pu_channel(0, 1);
  const Matrix expect = 0.5 * Matrix::Identity(2, 2) + 2.0 * g1.adjoint() * g1 + 0.25 * g2.adjoint() * g2;
  CHECK((b - expect).norm() < 1e-12);
}

TEST_CASE("fading solutions: duality, feasibility, exclusivity") {
  const FadingScenario s = scenario(8, 2, {1, 2, 1}, {1}, 20, {1.0, 1.0, 2.0}, {0.5});
  for (DraUtility u : {DraUtility::MacWsr, DraUtility::TdmaSumRate}) {
    const DraResult r = solve_dra(s, u);
    CHECK(r.report.max_relative_violation() <= 1e-6);
    for (const auto& rec : r.report.trace) CHECK(rec.dual_value >= r.report.objective - 1e-6);
    REQUIRE(r.report.constraints.size() == 4);
    CHECK(r.report.constraints[0].label == "atpc_1");
    CHECK(r.report.constraints[3].label == "aipc_1");
    if (u == DraUtility::TdmaSumRate) {
      for (std::size_t l = 0; l < s.size(); ++l) {
        int active = 0;
        for (std::size_t k = 0; k < 3; ++k) active += r.report.covariances(k, l).norm() > 0.0 ? 1 : 0;
        CHECK(active <= 1);
      }
    } else {
      CHECK(r.relative_gap <= 1e-3);
    }
  }
  CHECK(solve_dra(s, DraUtility::TdmaSumRate).report.objective <=
        solve_dra(s, DraUtility::MacWsr).report.dual_bound + 1e-6);
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(solve_dra(scenario(9, 1, {1, 1}, {1}, 3, {1.0, 0.0}, {0.5}), DraUtility::MacWsr), DomainError);
  FadingScenario s = scenario(9, 1, {1, 1}, {1}, 3, {1.0, 1.0}, {0.5});
  s.interference = {0.0};
  CHECK_THROWS_AS(solve_dra(s, DraUtility::MacWsr), DomainError);
  s.interference = {0.5};
  s.weights = {0.5, 1.0};
  CHECK_THROWS_AS(solve_dra(s, DraUtility::MacWsr), DomainError);
  CHECK_NOTHROW(solve_dra(s, DraUtility::TdmaSumRate));
  FadingProcess f;
  CHECK_THROWS_AS(FadingScenario::generate(Topology::bc(2, {1}, {}), f, {1.0}, {}), ConfigError);
}

TEST_CASE("interference diversity") {
  SUBCASE("two-point law, exact expectation") {
    const RealVector ones = RealVector::Ones(10);
    const DiversityEstimate e = interference_diversity_exact(ones, 1.0, 1.0, {InterferenceLaw::TwoPoint, 1.0});
    const auto d = orc::two_point_diversity(1.0, 1.0, 1.0);
    CHECK(e.constant == doctest::Approx(d.constant).epsilon(1e-12));
    CHECK(e.fluctuating == doctest::Approx(d.fluctuating).epsilon(1e-12));
    CHECK(std::abs(e.constant - 0.585) <= 1e-3);
    CHECK(std::abs(e.fluctuating - 0.708) <= 1e-3);
  }
  SUBCASE("constant law changes nothing") {
    const RealVector g = rayleigh_power_gains(1000, 1);
    const DiversityEstimate e = interference_diversity(g, 2.0, 0.5, {InterferenceLaw::Constant, 0.0}, 2);
    CHECK(e.fluctuating == doctest::Approx(e.constant).epsilon(1e-14));
  }
  SUBCASE("exponential interference helps the PU") {
    const RealVector g = rayleigh_power_gains(20000, 3);
    const DiversityEstimate e = interference_diversity(g, 1.0, 1.0, {InterferenceLaw::Exponential, 1.0}, 4);
    CHECK(e.samples == 20000);
    CHECK(e.fluctuating - e.constant > 3.0 * e.difference_se);
    const DiversityEstimate again = interference_diversity(g, 1.0, 1.0, {InterferenceLaw::Exponential, 1.0}, 4);
    CHECK(again.fluctuating == e.fluctuating);
  }
  SUBCASE("the PU rate is convex in the interference level") {
    for (double kappa : {0.1, 1.0, 10.0}) {
      auto rate = [&](double x) { return std::log2(1.0 + kappa / (1.0 + x)); };
      for (double a = 0.0; a < 4.0; a += 0.5) {
        const double b = a + 1.3;
        CHECK(rate(0.5 * (a + b)) <= 0.5 * (rate(a) + rate(b)) + 1e-15);
      }
    }
  }
  SUBCASE("bad inputs") {
    CHECK_THROWS_AS(interference_diversity(RealVector(), 1.0, 1.0, {}, 1), DomainError);
    CHECK_THROWS_AS(interference_diversity(RealVector::Ones(3), 1.0, -1.0, {}, 1), DomainError);
    CHECK_THROWS_AS(interference_diversity_exact(RealVector::Ones(3), 1.0, 1.0, {InterferenceLaw::Exponential, 1.0}),
                    DomainError);
    CHECK_THROWS_AS(interference_diversity(RealVector::Ones(3), 1.0, 1.0, {InterferenceLaw::TwoPoint, 1.5}, 1),
                    DomainError);
  }
}

TEST_CASE("Rayleigh power gains have unit mean") {
  const RealVector g = rayleigh_power_gains(50000, 11);
  CHECK(std::abs(g.mean() - 1.0) < 0.03);
  CHECK((g.array() >= 0.0).all());
  CHECK(rayleigh_power_gains(10, 11) == rayleigh_power_gains(10, 11));
}

TEST_CASE("PU capacity constraint") {
  PuLinkModel m;
  m.pu_gains = RealVector::Ones(2);
  m.pu_gains(1) = 3.0;
  m.su_gains = RealVector::Ones(2);
  m.su_gains(1) = 0.5;
  m.pu_power = 1.0;
  m.min_capacity = 1.0;

  const auto silent = pu_capacity_constraint(m, RealVector::Zero(2));
  CHECK(silent.value == doctest::Approx(0.5 * (1.0 + 2.0)));
  CHECK(silent.satisfied);

  RealVector p(2);
  p << 1.0, 2.0;
  const auto loud = pu_capacity_constraint(m, p);
  CHECK(loud.value == doctest::Approx(orc::pu_ergodic_capacity({1.0, 3.0}, {1.0, 0.5}, 1.0, {1.0, 2.0})).epsilon(1e-12));
  CHECK(loud.value == doctest::Approx(0.5 * (std::log2(1.5) + std::log2(2.5))).epsilon(1e-12));
  CHECK_FALSE(loud.satisfied);
  CHECK(pu_capacity_constraint(m, 2.0 * p).value < loud.value);

  CHECK_THROWS_AS(pu_capacity_constraint(m, RealVector::Zero(3)), DomainError);
  CHECK_THROWS_AS(pu_capacity_constraint(m, -p), DomainError);
}
