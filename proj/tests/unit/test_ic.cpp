// SPDX-License-Identifier: Apache-2.0
#include "crdra/errors.hpp"
#include "crdra/ic.hpp"
#include "crdra/linalg.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"
#include "crdra/oracles/algebra.hpp"
#include "crdra/oracles/search.hpp"

#include "doctest.h"

#include <cmath>

using namespace crdra;
namespace orc = crdra::oracles;

namespace {

IcProblem random_ic(std::uint64_t seed, std::vector<Index> tx, std::vector<Index> rx, std::vector<Index> pus,
                    std::vector<double> power, std::vector<double> gamma, double cross_variance = 1.0) {
  FadingProcess f;
  f.seed = seed;
  f.cross_variance = cross_variance;
  const NetworkInstance inst = generate_instance(Topology::ic(std::move(tx), std::move(rx), std::move(pus)), f);
  return IcProblem::from_instance(inst, std::move(power), std::move(gamma));
}

double gain(const ChannelMatrix& c) { return std::norm(c(0, 0)); }

CovarianceSet scalar_powers(double p1, double p2) {
  CovarianceSet r(2, 1);
  r(0) = Matrix::Constant(1, 1, p1);
  r(1) = Matrix::Constant(1, 1, p2);
  return r;
}

}  // namespace

TEST_CASE("rates: zero covariances and hand formula") {
  const IcProblem p = random_ic(1, {1, 1}, {1, 1}, {}, {1.0, 1.0}, {});
  CHECK(weighted_sum_rate_ic(p, scalar_powers(0.0, 0.0)) == 0.0);
  const RealVector r = ic_user_rates(p, scalar_powers(0.7, 1.3));
  const auto expect = orc::scalar_ic_rates(gain(p.direct[0]), gain(p.direct[1]), gain(p.cross[1][0]), gain(p.cross[0][1]),
                                           0.7, 1.3);
  CHECK(r(0) == doctest::Approx(expect[0]).epsilon(1e-12));
  CHECK(r(1) == doctest::Approx(expect[1]).epsilon(1e-12));
}

TEST_CASE("rates: without cross channels the links decouple") {
  IcProblem p = random_ic(2, {2, 1}, {2, 2}, {}, {1.0, 1.0}, {});
  p.cross[0][1].setZero();
  p.cross[1][0].setZero();
  std::mt19937_64 rng = seeded_engine(2, 0);
  CovarianceSet r(2, 1);
  r(0) = orc::random_psd(2, 1.0, rng);
  r(1) = orc::random_psd(1, 0.5, rng);
  const RealVector rates = ic_user_rates(p, r);
  CHECK(rates(0) == doctest::Approx(orc::cofactor_rate(p.direct[0], r(0))).epsilon(1e-10));
  CHECK(rates(1) == doctest::Approx(orc::cofactor_rate(p.direct[1], r(1))).epsilon(1e-10));
}

TEST_CASE("a single link is the point-to-point problem") {
  const IcProblem p = random_ic(3, {2}, {2}, {1}, {2.0}, {0.2});
  CapacityProblem c;
  c.channel = p.direct[0];
  c.pu_channels = p.pu_channels[0];
  c.power = 2.0;
  c.interference = {0.2};
  const IcResult r = solve_ic_wsr(p, PipcSplit::equal(p.interference, 1));
  CHECK(std::abs(r.report.objective - solve_capacity(c).objective) <= 1e-4);
}

TEST_CASE("decoupled links reach their individual optima") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    IcProblem p = random_ic(10 + seed, {2, 2}, {2, 2}, {1}, {1.0, 2.0}, {0.4});
    p.cross[0][1].setZero();
    p.cross[1][0].setZero();
    const PipcSplit split = PipcSplit::equal(p.interference, 2);
    const IcResult r = solve_ic_wsr(p, split);
    double solo = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      CapacityProblem c;
      c.channel = p.direct[k];
      c.pu_channels = p.pu_channels[k];
      c.power = p.power[k];
      c.interference = {split.budget[0][k]};
      solo += solve_capacity(c).objective;
    }
    CHECK(std::abs(r.report.objective - solo) <= 1e-4);
    CHECK(r.report.converged);
  }
}

TEST_CASE("weak interference: iteration matches the power grid") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const IcProblem p = random_ic(20 + seed, {1, 1}, {1, 1}, {1}, {1.0, 1.0}, {0.5}, 0.01);
    const PipcSplit split = PipcSplit::equal(p.interference, 2);
    const IcResult r = solve_ic_wsr(p, split);
    const double grid = orc::ic_scalar_grid(gain(p.direct[0]), gain(p.direct[1]), gain(p.cross[1][0]),
                                            gain(p.cross[0][1]), gain(p.pu_channels[0][0]), gain(p.pu_channels[1][0]),
                                            1.0, 1.0, 0.25, 0.25, 1.0, 1.0, 50);
    CHECK(std::abs(r.report.objective - grid) <= 1e-3);
  }
}

TEST_CASE("iterates never lose sum-rate and respect the PU budgets") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IcProblem p = random_ic(30 + seed, {2, 2, 1}, {2, 1, 2}, {1, 2}, {1.0, 2.0, 1.5}, {0.3, 0.6});
    for (IcStrategy strategy : {IcStrategy::OwnRate, IcStrategy::Weighted}) {
      IcOptions o;
      o.strategy = strategy;
      const IcResult r = solve_ic_wsr(p, PipcSplit::equal(p.interference, 3), o);
      REQUIRE(r.history.size() >= 2);
      CHECK(r.history.front() == 0.0);
      for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] >= r.history[i - 1] - 10 * o.tolerance);
      CHECK(r.worst_iterate_violation <= 1e-6);
      CHECK(r.report.max_relative_violation() <= 1e-6);
      CHECK(r.user_rates.sum() == doctest::Approx(r.report.objective).epsilon(1e-9));
    }
  }
}

TEST_CASE("split validation") {
  const std::vector<double> gamma{1.0, 2.0};
  const PipcSplit equal = PipcSplit::equal(gamma, 4);
  CHECK(equal.budget[1][3] == doctest::Approx(0.5));
  CHECK_NOTHROW(equal.validate(gamma, 4));
  PipcSplit over = equal;
  over.budget[0][0] = 0.5;
  CHECK_THROWS_AS(over.validate(gamma, 4), DomainError);
  PipcSplit negative = equal;
  negative.budget[1][2] = -0.1;
  CHECK_THROWS_AS(negative.validate(gamma, 4), DomainError);
  CHECK_THROWS_AS(equal.validate(gamma, 3), DomainError);
  CHECK_THROWS_AS(equal.validate({1.0}, 4), DomainError);
}

TEST_CASE("split search") {
  SUBCASE("never worse than the equal split") {
    const IcProblem p = random_ic(40, {2, 2}, {2, 2}, {1}, {1.0, 1.0}, {0.2});
    const SplitSearch s = search_split(p, 4);
    CHECK(s.best_objective >= s.equal_objective - 1e-9);
    CHECK(s.evaluated == 6);
    CHECK_NOTHROW(s.best.validate(p.interference, 2));
  }
  SUBCASE("a link that cannot reach the PU gets no share") {
    IcProblem p = random_ic(41, {1, 1}, {1, 1}, {1}, {1.0, 1.0}, {0.05});
    p.pu_channels[1][0].setZero();
    const SplitSearch s = search_split(p, 4);
    CHECK(s.best.budget[0][0] == doctest::Approx(0.05));
    CHECK(s.best_objective > s.equal_objective);
  }
  SUBCASE("no PUs means one evaluation") {
    const IcProblem p = random_ic(42, {1, 1}, {1, 1}, {}, {1.0, 1.0}, {});
    CHECK(search_split(p, 4).evaluated == 1);
  }
}

TEST_CASE("invalid IC problems are rejected") {
  IcProblem p = random_ic(50, {1, 1}, {1, 1}, {1}, {1.0, 1.0}, {0.5});
  IcProblem bad = p;
  bad.power[1] = 0.0;
  CHECK_THROWS_AS(solve_ic_wsr(bad, PipcSplit::equal(bad.interference, 2)), DomainError);
  bad = p;
  bad.cross[0][1] = ChannelMatrix::Zero(2, 1);
  CHECK_THROWS_AS(solve_ic_wsr(bad, PipcSplit::equal(bad.interference, 2)), DomainError);
  CHECK_THROWS_AS(search_split(p, 0), DomainError);
}
