// SPDX-License-Identifier: Apache-2.0
#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"
#include "crdra/mac.hpp"
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

CovarianceSet random_covariances(const std::vector<ChannelMatrix>& h, std::mt19937_64& rng, double trace = 1.0) {
  CovarianceSet s(h.size(), 1);
  for (std::size_t k = 0; k < h.size(); ++k) s(k) = orc::random_psd(h[k].cols(), trace, rng);
  return s;
}

}  // namespace

TEST_CASE("weighted sum-rate: single user and zero covariances") {
  std::mt19937_64 rng = seeded_engine(1, 0);
  const std::vector<ChannelMatrix> one{complex_gaussian(3, 2, 1.0, rng)};
  const CovarianceSet s = random_covariances(one, rng, 2.0);
  CHECK(weighted_sum_rate_mac(one, s, {1.0}) == doctest::Approx(rate_p2p(one[0], s(0))).epsilon(1e-12));

  const std::vector<ChannelMatrix> two{complex_gaussian(2, 2, 1.0, rng), complex_gaussian(2, 1, 1.0, rng)};
  CHECK(weighted_sum_rate_mac(two, CovarianceSet::zeros({2, 1}), {1.0, 0.5}) == 0.0);
}

TEST_CASE("weighted sum-rate: telescoped and successive-decoding forms agree") {
  std::mt19937_64 rng = seeded_engine(2, 0);
  for (int t = 0; t < 10; ++t) {
    const std::vector<ChannelMatrix> h{complex_gaussian(2, 2, 1.0, rng), complex_gaussian(2, 2, 1.0, rng)};
    const CovarianceSet s = random_covariances(h, rng, 1.5);
    const std::vector<double> mu{1.3, 0.4};
    const auto rates = orc::mac_rates_quotient(h, {s(0), s(1)});
    const double quotient = mu[0] * rates[0] + mu[1] * rates[1];
    CHECK(std::abs(weighted_sum_rate_mac(h, s, mu) - quotient) < 1e-10);
    CHECK(std::abs(weighted_sum_rate_mac_successive(h, s, mu) - quotient) < 1e-10);
  }
}

TEST_CASE("weighted sum-rate rejects unsorted weights") {
  std::mt19937_64 rng = seeded_engine(3, 0);
  const std::vector<ChannelMatrix> h{complex_gaussian(2, 1, 1.0, rng), complex_gaussian(2, 1, 1.0, rng)};
  CHECK_THROWS_AS(weighted_sum_rate_mac(h, CovarianceSet::zeros({1, 1}), {0.5, 1.0}), DomainError);
}

TEST_CASE("weighted sum-rate is concave along segments") {
  std::mt19937_64 rng = seeded_engine(4, 0);
  for (int t = 0; t < 20; ++t) {
    const std::vector<ChannelMatrix> h{complex_gaussian(2, 2, 1.0, rng), complex_gaussian(2, 2, 1.0, rng)};
    const CovarianceSet a = random_covariances(h, rng, 3.0);
    const CovarianceSet b = random_covariances(h, rng, 3.0);
    const std::vector<double> mu{1.0, 0.3};
    const double mid = weighted_sum_rate_mac(h, CovarianceSet::blend(a, b, 0.5), mu);
    CHECK(mid >= 0.5 * (weighted_sum_rate_mac(h, a, mu) + weighted_sum_rate_mac(h, b, mu)) - 1e-9);
  }
}

TEST_CASE("inner block-coordinate ascent never decreases the Lagrangian") {
  std::mt19937_64 rng = seeded_engine(5, 0);
  const std::vector<ChannelMatrix> h{complex_gaussian(3, 2, 1.0, rng), complex_gaussian(3, 2, 1.0, rng),
                                     complex_gaussian(3, 1, 1.0, rng)};
  const std::vector<double> mu{1.0, 0.6, 0.2};
  std::vector<Matrix> pen;
  for (const auto& g : h) {
    const Matrix p = orc::random_psd(g.cols(), 0.5, rng);
    pen.push_back(p + Matrix::Identity(g.cols(), g.cols()) * 0.2);
  }
  double previous = 0.0;  // value at S = 0
  for (std::size_t cycles = 1; cycles <= 12; ++cycles) {
    InnerOptions o;
    o.max_cycles = cycles;
    const InnerResult r = maximize_mac_lagrangian(h, mu, pen, nullptr, o);
    double lag = weighted_sum_rate_mac(h, r.covariances, mu);
    for (std::size_t k = 0; k < h.size(); ++k) lag -= (pen[k] * r.covariances(k)).trace().real();
    CHECK(lag == doctest::Approx(r.value).epsilon(1e-9));
    CHECK(r.value >= previous - 1e-12);
    previous = r.value;
  }
}

TEST_CASE("single user reduces to the point-to-point capacity") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const NetworkInstance inst = generate_instance(Topology::mac(3, {3}, {1, 2}), seeded(seed));
    const MacProblem p = MacProblem::from_instance(inst, {2.0}, {0.3, 0.4});
    CapacityProblem c;
    c.channel = p.channels[0];
    c.pu_channels = {p.pu_channels[0][0], p.pu_channels[0][1]};
    c.power = 2.0;
    c.interference = {0.3, 0.4};
    CHECK(std::abs(solve_mac_wsr(p).objective - solve_capacity(c).objective) <= 1e-4);
  }
}

TEST_CASE("two scalar users match the power grid") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    NetworkInstance inst = generate_instance(Topology::mac(1, {1, 1}, {1}), seeded(10 + seed));
    inst.weights = {1.0, 0.6};
    const MacProblem p = MacProblem::from_instance(inst, {1.0, 2.0}, {0.4});
    const SolveReport r = solve_mac_wsr(p);
    const auto g = [&](std::size_t k) { return std::norm(p.channels[k](0, 0)); };
    const auto e = [&](std::size_t k) { return std::norm(p.pu_channels[k][0](0, 0)); };
    const auto grid = orc::mac_scalar_grid(g(0), g(1), e(0), e(1), 1.0, 0.6, 1.0, 2.0, 0.4, 200);
    CHECK(std::abs(r.objective - grid.value) <= 1e-2);
    CHECK(grid.value <= r.dual_bound + 1e-9);
  }
}

TEST_CASE("a zero-weight user stays silent") {
  NetworkInstance inst = generate_instance(Topology::mac(2, {2, 2}, {1}), seeded(20));
  inst.weights = {1.0, 0.0};
  const MacProblem p = MacProblem::from_instance(inst, {1.0, 1.0}, {0.2});
  const SolveReport r = solve_mac_wsr(p);
  CHECK(r.covariances(1).trace().real() <= 1e-6);
  CapacityProblem c;
  c.channel = p.channels[0];
  c.pu_channels = {p.pu_channels[0][0]};
  c.power = 1.0;
  c.interference = {0.2};
  CHECK(std::abs(r.objective - solve_capacity(c).objective) <= 1e-4);
}

TEST_CASE("dual solve: gap, feasibility and complementary slackness") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    NetworkInstance inst = generate_instance(Topology::mac(2, {2, 2}, {1, 1}), seeded(30 + seed));
    inst.weights = {1.0, 0.5};
    const SolveReport r = solve_mac_wsr(MacProblem::from_instance(inst, {1.0, 2.0}, {0.2, 0.5}));
    CHECK(r.converged);
    CHECK(r.gap <= 1e-5);
    CHECK(r.max_relative_violation() <= 1e-6);
    for (const auto& c : r.constraints) CHECK(c.slackness() <= 1e-4 * c.budget);
  }
}

TEST_CASE("swapping equally weighted users leaves the optimum unchanged") {
  NetworkInstance inst = generate_instance(Topology::mac(2, {2, 2}, {1}), seeded(40));
  inst.weights = {1.0, 1.0};
  const MacProblem p = MacProblem::from_instance(inst, {1.0, 2.0}, {0.3});
  MacProblem q = p;
  std::swap(q.channels[0], q.channels[1]);
  std::swap(q.pu_channels[0], q.pu_channels[1]);
  std::swap(q.power[0], q.power[1]);
  DualOptions tight;
  tight.tolerance = 1e-7;
  CHECK(std::abs(solve_mac_wsr(p, tight).objective - solve_mac_wsr(q, tight).objective) <= 1e-5);
}

TEST_CASE("sum-power weighted sum-rate is feasible and beats its inputs") {
  std::mt19937_64 rng = seeded_engine(6, 0);
  const std::vector<ChannelMatrix> h{complex_gaussian(2, 2, 1.0, rng), complex_gaussian(2, 1, 1.0, rng)};
  const std::vector<double> mu{1.0, 0.5};
  const InnerResult r = solve_mac_sum_power(h, mu, 3.0);
  double total = 0.0;
  for (std::size_t k = 0; k < 2; ++k) total += r.covariances(k).trace().real();
  CHECK(total <= 3.0 * (1.0 + 1e-9));
  for (int t = 0; t < 200; ++t) {
    CovarianceSet s = random_covariances(h, rng, 1.0);
    double tr = s(0).trace().real() + s(1).trace().real();
    s = s.scaled(3.0 / tr);
    CHECK(weighted_sum_rate_mac(h, s, mu) <= r.value + 1e-6);
  }
}
