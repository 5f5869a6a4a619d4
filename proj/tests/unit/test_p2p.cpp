// SPDX-License-Identifier: Apache-2.0
#include "crdra/errors.hpp"
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

FadingProcess seeded(std::uint64_t seed) {
  FadingProcess f;
  f.seed = seed;
  return f;
}

CapacityProblem random_problem(std::uint64_t seed, Index n, Index m, std::vector<Index> pus, double power,
                               std::vector<double> gamma) {
  const NetworkInstance inst = generate_instance(Topology::point_to_point(n, m, std::move(pus)), seeded(seed));
  return CapacityProblem::from_instance(inst, power, std::move(gamma));
}

// Unconstrained capacity by classic water-filling over the squared singular values.
double water_filling_capacity(const Matrix& h, double power) {
  Eigen::JacobiSVD<Matrix> svd(h);
  std::vector<double> gains;
  for (Index i = 0; i < h.cols(); ++i) {
    gains.push_back(i < svd.singularValues().size() ? std::pow(svd.singularValues()(i), 2) : 0.0);
  }
  return static_cast<double>(gains.size()) * orc::ergodic_water_filling(gains, power / static_cast<double>(gains.size()));
}

void check_report_invariants(const SolveReport& r, double tol) {
  CHECK(r.converged);
  CHECK(r.gap <= tol);
  CHECK(r.gap >= -1e-9);
  CHECK(r.max_relative_violation() <= 1e-6);
  for (const auto& c : r.constraints) {
    if (std::isfinite(c.budget) && c.budget > 0.0) CHECK(c.slackness() <= std::max(tol, 1e-4) * c.budget);
  }
}

}  // namespace

TEST_CASE("penalized water-filling closed form") {
  Matrix h(1, 1);
  h(0, 0) = 2.0;
  const auto r = water_fill_penalized(h, Matrix::Identity(1, 1));
  CHECK(r.covariance(0, 0).real() == doctest::Approx(1.0 / std::log(2.0) - 0.25).epsilon(1e-12));
  CHECK_FALSE(r.regularized);

  Matrix weak = Matrix::Identity(2, 2) * 0.6;
  CHECK(water_fill_penalized(weak, Matrix::Identity(2, 2)).covariance.isZero());

  const auto reg = water_fill_penalized(h, Matrix::Zero(1, 1));
  CHECK(reg.regularized);
  CHECK(reg.covariance.allFinite());
}

TEST_CASE("penalized water-filling beats random covariances") {
  std::mt19937_64 rng = seeded_engine(31, 0);
  for (int t = 0; t < 3; ++t) {
    const Matrix h = complex_gaussian(3, 3, 1.0, rng);
    Matrix tmat = orc::random_psd(3, 3.0, rng) + Matrix::Identity(3, 3) * 0.3;
    if (t == 0) tmat = Matrix::Identity(3, 3);
    const Matrix s = water_fill_penalized(h, tmat).covariance;
    const double value = rate_p2p(h, s) - (tmat * s).trace().real();
    CHECK(orc::sampled_penalized_max(h, tmat, 10000, 3.0 * (s.trace().real() + 1.0), 70 + t) <= value + 1e-9);
  }
}

TEST_CASE("infinite interference budgets give the water-filling capacity") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CapacityProblem p = random_problem(seed, 4, 3, {1, 2}, 5.0, {kInf, kInf});
    const SolveReport r = solve_capacity(p);
    CHECK(r.objective == doctest::Approx(water_filling_capacity(p.channel, 5.0)).epsilon(1e-5));
  }
}

TEST_CASE("capacity matches the covariance grid for two transmit antennas") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const CapacityProblem p = random_problem(40 + seed, 2, 2, {1}, 1.0, {0.1});
    const SolveReport r = solve_capacity(p);
    check_report_invariants(r, 1e-5);
    const auto grid = orc::p2p_covariance_grid(p.channel, p.pu_channels, 1.0, {0.1}, 40);
    CHECK(grid.points >= 100000);
    CHECK(std::abs(r.objective - grid.value) <= 1e-2);
    CHECK(grid.value <= r.dual_bound + 1e-9);
  }
}

TEST_CASE("capacity is monotone in the budgets") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CapacityProblem base = random_problem(60 + seed, 3, 3, {1, 1}, 2.0, {0.2, 0.5});
    CapacityProblem more_power = base;
    more_power.power = 3.0;
    CapacityProblem more_gamma = base;
    more_gamma.interference[1] = 1.0;
    const double v = solve_capacity(base).objective;
    CHECK(solve_capacity(more_power).objective >= v - 2e-5);
    CHECK(solve_capacity(more_gamma).objective >= v - 2e-5);
  }
}

TEST_CASE("dual iterates never fall below the best primal value") {
  const CapacityProblem p = random_problem(7, 4, 4, {1, 1}, 10.0, {0.1, 0.1});
  const SolveReport r = solve_capacity(p);
  check_report_invariants(r, 1e-5);
  REQUIRE_FALSE(r.trace.empty());
  for (const auto& rec : r.trace) CHECK(rec.dual_value >= rec.best_primal - 1e-9);
}

TEST_CASE("zero interference budgets null the PU directions exactly") {
  const CapacityProblem p = random_problem(8, 4, 4, {1, 1}, 3.0, {0.0, 0.0});
  const SolveReport r = solve_capacity(p);
  for (const auto& c : r.constraints) {
    if (c.label != "ptpc") CHECK(c.usage <= 1e-10);
  }
  CHECK(r.objective > 0.0);

  const CapacityProblem blocked = random_problem(8, 1, 2, {1}, 1.0, {0.0});
  CHECK(solve_capacity(blocked).objective == 0.0);
}

TEST_CASE("invalid capacity problems are rejected") {
  CapacityProblem p = random_problem(9, 2, 2, {1}, 1.0, {0.1});
  p.power = 0.0;
  CHECK_THROWS_AS(solve_capacity(p), DomainError);
  p.power = 1.0;
  p.interference = {-1.0};
  CHECK_THROWS_AS(solve_capacity(p), DomainError);
}

TEST_CASE("single receive antenna: maximum-ratio transmission without PUs") {
  std::mt19937_64 rng = seeded_engine(10, 0);
  const RowVector h = complex_gaussian(1, 3, 1.0, rng);
  const MisoBeamformer b = solve_miso_beamforming(h, {}, 2.0, {});
  const Vector mrt = std::sqrt(2.0) * h.adjoint() / h.norm();
  CHECK((b.beamformer - mrt).norm() < 1e-3);
  CHECK(b.rate == doctest::Approx(std::log2(1.0 + 2.0 * h.squaredNorm())).epsilon(1e-5));
}

TEST_CASE("single receive antenna: a PU orthogonal to the link is inactive") {
  RowVector h(2);
  h << Complex(1.0, 0.5), Complex(0.0, 0.0);
  Matrix g(1, 2);
  g << 0.0, Complex(0.7, -0.2);
  const MisoBeamformer free = solve_miso_beamforming(h, {}, 1.5, {});
  for (double gamma : {1e-3, 0.1, 10.0}) {
    const MisoBeamformer b = solve_miso_beamforming(h, {g}, 1.5, {gamma});
    CHECK(b.rate == doctest::Approx(free.rate).epsilon(1e-5));
  }
}

TEST_CASE("single receive antenna: rank one and the polar grid") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    std::mt19937_64 rng = seeded_engine(11 + seed, 0);
    const RowVector h = complex_gaussian(1, 2, 1.0, rng);
    const Matrix g = complex_gaussian(1, 2, 1.0, rng);
    const MisoBeamformer b = solve_miso_beamforming(h, {g}, 1.0, {0.1});
    CHECK(b.second_eigenvalue <= 1e-6 * b.largest_eigenvalue);
    CHECK(b.beamformer.squaredNorm() <= 1.0 * (1.0 + 1e-6));
    CHECK((g * b.beamformer).squaredNorm() <= 0.1 * (1.0 + 1e-6));
    CHECK(std::abs((h * b.beamformer)(0).imag()) < 1e-9);
    const auto grid = orc::miso_polar_grid(h, {g}, 1.0, {0.1}, 300);
    CHECK(std::abs(b.rate - grid.value) <= 1e-3);
  }
}

TEST_CASE("partial projection without budgets is water-filling") {
  const CapacityProblem p = random_problem(12, 4, 4, {1, 1}, 4.0, {kInf, kInf});
  const SolveReport r = partial_projection(p, 0);
  CHECK(r.objective == doctest::Approx(water_filling_capacity(p.channel, 4.0)).epsilon(1e-5));
}

TEST_CASE("partial projection nulling every PU direction leaks nothing") {
  const CapacityProblem p = random_problem(13, 4, 4, {1, 1}, 4.0, {0.1, 0.1});
  REQUIRE(max_nulled_directions(p) == 2);
  const SolveReport r = partial_projection(p, 2);
  for (const auto& c : r.constraints) {
    if (c.label != "ptpc") CHECK(c.usage <= 1e-10);
  }
  CHECK_THROWS_AS(partial_projection(p, 3), DomainError);
}

TEST_CASE("exact capacity dominates every partial projection") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    for (double power : {0.1, 1.0, 10.0, 100.0}) {
      const CapacityProblem p = random_problem(100 + seed, 4, 4, {1, 1}, power, {0.1, 0.1});
      const SolveReport opt = solve_capacity(p);
      for (std::size_t b = 0; b <= max_nulled_directions(p); ++b) {
        const SolveReport heur = partial_projection(p, b);
        CHECK(heur.max_relative_violation() <= 1e-6);
        CHECK(opt.objective >= heur.objective - 1e-6);
      }
    }
  }
}
