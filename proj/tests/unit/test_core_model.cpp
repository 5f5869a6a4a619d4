// SPDX-License-Identifier: Apache-2.0
#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"
#include "crdra/scenario.hpp"
#include "crdra/oracles/algebra.hpp"

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

}  // namespace

TEST_CASE("generated point-to-point instance has the requested shapes") {
  const NetworkInstance inst = generate_instance(Topology::point_to_point(4, 4, {1, 1}), seeded(7), 0);
  REQUIRE(inst.users() == 1);
  CHECK(inst.direct[0].rows() == 4);
  CHECK(inst.direct[0].cols() == 4);
  REQUIRE(inst.pus() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(inst.pu_channel(0, j).rows() == 1);
    CHECK(inst.pu_channel(0, j).cols() == 4);
  }
}

TEST_CASE("generation is a pure function of seed and dimension") {
  const Topology topo = Topology::mac(2, {2, 1}, {1});
  FadingProcess f = seeded(3);
  f.dimensions = 8;
  FadingProcess g = f;
  g.seed = 4;
  const NetworkInstance a = generate_instance(topo, f, 5);
  const NetworkInstance b = generate_instance(topo, f, 5);
  const NetworkInstance c = generate_instance(topo, g, 5);
  const NetworkInstance d = generate_instance(topo, f, 6);
  CHECK_THROWS_AS(generate_instance(topo, f, 8), ConfigError);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a.direct[k] == b.direct[k]);
    CHECK(a.pu[k][0] == b.pu[k][0]);
    CHECK(a.direct[k] != c.direct[k]);
    CHECK(a.direct[k] != d.direct[k]);
  }
}

TEST_CASE("channel entries have the configured variance") {
  std::mt19937_64 rng = seeded_engine(99, 0);
  for (double variance : {1.0, 0.25, 3.0}) {
    const Matrix m = complex_gaussian(100, 100, variance, rng);
    REQUIRE(m.allFinite());
    const double empirical = m.squaredNorm() / 1e4;
    CHECK(std::abs(empirical / variance - 1.0) < 0.05);
  }
  CHECK(complex_gaussian(3, 3, 0.0, rng).isZero());
}

TEST_CASE("invalid topologies are rejected") {
  CHECK_THROWS_AS(Topology::point_to_point(0, 2, {}).validate(), ConfigError);
  CHECK_THROWS_AS(Topology::mac(2, {static_cast<Index>(kMaxDimension + 1)}, {}).validate(), ConfigError);
  CHECK_THROWS_AS(generate_instance(Topology::ic({1, 1}, {1}, {}), seeded(0)), ConfigError);
}

TEST_CASE("rate of the point-to-point link") {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  CHECK(rate_p2p(h, Matrix::Zero(1, 1)) == 0.0);
  CHECK(rate_p2p(h, Matrix::Identity(1, 1)) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng = seeded_engine(1, 1);
  for (int t = 0; t < 10; ++t) {
    const Matrix g = complex_gaussian(2, 2, 1.0, rng);
    const Matrix s = orc::random_psd(2, 3.0, rng);
    CHECK(std::abs(rate_p2p(g, s) - orc::cofactor_rate(g, s)) < 1e-12);
  }
  const Matrix g = complex_gaussian(3, 4, 1.0, rng);
  const Matrix s = orc::random_psd(4, 2.0, rng);
  CHECK(std::abs(rate_p2p(g, s) - orc::cofactor_rate(g, s)) < 1e-12);
}

TEST_CASE("rate rejects covariances that are not PSD") {
  Matrix h = Matrix::Identity(2, 2);
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = -0.5;
  CHECK_THROWS_AS(rate_p2p(h, s), DomainError);
  Matrix skew = Matrix::Identity(2, 2);
  skew(0, 1) = 1.0;
  CHECK_THROWS_AS(rate_p2p(h, skew), DomainError);
}

TEST_CASE("rate is monotone in the PSD order") {
  std::mt19937_64 rng = seeded_engine(2, 1);
  for (int t = 0; t < 50; ++t) {
    const Matrix h = complex_gaussian(3, 3, 1.0, rng);
    const Matrix s = orc::random_psd(3, 1.0, rng);
    const Vector v = complex_gaussian(3, 1, 1.0, rng);
    const Matrix bigger = s + v * v.adjoint();
    CHECK(rate_p2p(h, bigger) >= rate_p2p(h, s) - 1e-12);
  }
}

TEST_CASE("interference power") {
  std::mt19937_64 rng = seeded_engine(3, 1);
  const Matrix s = orc::random_psd(3, 2.0, rng);
  CHECK(interference_power(complex_gaussian(1, 3, 1.0, rng), Matrix::Zero(3, 3)) == 0.0);
  CHECK(interference_power(Matrix::Identity(3, 3), s) == doctest::Approx(s.trace().real()).epsilon(1e-14));

  const Matrix g = complex_gaussian(1, 2, 1.0, rng);
  const Matrix s2 = orc::random_psd(2, 1.0, rng);
  CHECK(std::abs(interference_power(g, s2) - orc::expanded_interference(g, s2)) < 1e-13);

  CHECK_THROWS_AS(interference_power(g, s), DomainError);
}

TEST_CASE("interference power is linear in the covariance") {
  std::mt19937_64 rng = seeded_engine(4, 1);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const Matrix g = complex_gaussian(2, 3, 1.0, rng);
    const Matrix s1 = orc::random_psd(3, 1.0, rng);
    const Matrix s2 = orc::random_psd(3, 2.0, rng);
    const double a = u(rng);
    const double b = u(rng);
    const double lhs = interference_power(g, a * s1 + b * s2);
    const double rhs = a * interference_power(g, s1) + b * interference_power(g, s2);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
  }
}

TEST_CASE("PSD projection") {
  std::mt19937_64 rng = seeded_engine(5, 1);
  const Matrix psd = orc::random_psd(3, 2.0, rng);
  CHECK((psd_project(psd) - psd).norm() < 1e-12);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -2.0;
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = 1.0;
  CHECK((psd_project(d) - expected).norm() < 1e-14);

  for (int t = 0; t < 5; ++t) {
    const Matrix a = orc::random_hermitian(3, rng);
    const Matrix p = psd_project(a);
    CHECK((psd_project(p) - p).norm() < 1e-12);
    CHECK(orc::nearest_psd_margin(a, p, 2000, 0.05, 100 + t) >= -1e-12);
    CHECK(orc::nearest_psd_margin(a, p, 2000, 0.5, 200 + t) >= -1e-12);
  }

  Matrix non_hermitian = Matrix::Identity(2, 2);
  non_hermitian(0, 1) = 3.0;
  CHECK_THROWS_AS(psd_project(non_hermitian), DomainError);
}

TEST_CASE("covariance set validation") {
  CovarianceSet s = CovarianceSet::zeros({2, 3}, 2);
  CHECK(s.users() == 2);
  CHECK(s.dims() == 2);
  CHECK_NOTHROW(s.validate());
  s(1, 1)(0, 0) = -1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("constraint set validation") {
  ConstraintSet c;
  c.ptpc.push_back({0, 1.0});
  c.pipc.push_back({0, 0.0});
  CHECK_NOTHROW(c.validate());
  c.pipc.push_back({1, -0.1});
  CHECK_THROWS_AS(c.validate(), DomainError);
}
