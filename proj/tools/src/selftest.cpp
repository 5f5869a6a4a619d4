// SPDX-License-Identifier: Apache-2.0
#include "crdra/bc.hpp"
#include "crdra/dra.hpp"
#include "crdra/ic.hpp"
#include "crdra/linalg.hpp"
#include "crdra/mac.hpp"
#include "crdra/oracles/algebra.hpp"
#include "crdra/oracles/search.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"
#include "crdra/tools/experiments.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <ostream>

namespace crdra::tools {

namespace {

namespace orc = crdra::oracles;

FadingProcess seeded(std::uint64_t seed) {
  FadingProcess f;
  f.seed = seed;
  return f;
}

double check_rate_determinant() {
  std::mt19937_64 rng = seeded_engine(11, 1);
  const Matrix h = complex_gaussian(3, 3, 1.0, rng);
  const Matrix s = orc::random_psd(3, 2.0, rng);
  return std::abs(rate_p2p(h, s) - orc::cofactor_rate(h, s));
}

double check_interference_expansion() {
  std::mt19937_64 rng = seeded_engine(12, 1);
  const Matrix g = complex_gaussian(2, 3, 1.0, rng);
  const Matrix s = orc::random_psd(3, 1.5, rng);
  return std::abs(interference_power(g, s) - orc::expanded_interference(g, s));
}

double check_water_fill() {
  std::mt19937_64 rng = seeded_engine(13, 1);
  const Matrix h = complex_gaussian(3, 3, 1.0, rng);
  const Matrix t = Matrix::Identity(3, 3);
  const Matrix s = water_fill_penalized(h, t).covariance;
  const double value = rate_p2p(h, s) - s.trace().real();
  return std::max(0.0, orc::sampled_penalized_max(h, t, 2000, 10.0, 5) - value);
}

double check_capacity_grid() {
  const NetworkInstance inst = generate_instance(Topology::point_to_point(2, 2, {1}), seeded(21));
  const CapacityProblem p = CapacityProblem::from_instance(inst, 1.0, {0.1});
  const double grid = orc::p2p_covariance_grid(p.channel, p.pu_channels, 1.0, {0.1}, 24).value;
  return std::abs(solve_capacity(p).objective - grid);
}

double check_mac_grid() {
  NetworkInstance inst = generate_instance(Topology::mac(1, {1, 1}, {1}), seeded(22));
  inst.weights = {1.0, 0.5};
  const MacProblem p = MacProblem::from_instance(inst, {1.0, 2.0}, {0.5});
  const auto g = [&](std::size_t k) { return std::norm(p.channels[k](0, 0)); };
  const auto e = [&](std::size_t k) { return std::norm(p.pu_channels[k][0](0, 0)); };
  const double grid = orc::mac_scalar_grid(g(0), g(1), e(0), e(1), 1.0, 0.5, 1.0, 2.0, 0.5, 60).value;
  return std::abs(solve_mac_wsr(p).objective - grid);
}

double check_bc_grid() {
  NetworkInstance inst = generate_instance(Topology::bc(1, {1, 1}, {1}), seeded(23));
  inst.weights = {1.0, 0.5};
  const BcProblem p = BcProblem::from_instance(inst, 2.0, {0.5});
  const double grid = orc::bc_scalar_grid(std::norm(p.channels[0](0, 0)), std::norm(p.channels[1](0, 0)),
                                          std::norm(p.pu_channels[0](0, 0)), 1.0, 0.5, 2.0, 0.5, 60)
                          .value;
  return std::abs(solve_bc_wsr(p).objective - grid);
}

double check_balance_closed_form() {
  const NetworkInstance inst = generate_instance(Topology::bc(3, {1}, {1}), seeded(24));
  const MisoBcProblem p = MisoBcProblem::from_instance(inst, 2.0, {0.2});
  const double exact = orc::single_user_balance_closed_form(p.channels[0], p.pu_channels[0], 2.0, 0.2);
  return std::abs(solve_sinr_balancing(p, 1e-7).alpha_star - exact) / std::max(1.0, exact);
}

double check_ergodic_water_filling() {
  FadingProcess f = seeded(25);
  f.dimensions = 16;
  const FadingScenario sc = FadingScenario::generate(Topology::mac(1, {1}, {}), f, {1.5}, {});
  std::vector<double> gains;
  for (const auto& d : sc.dimensions) gains.push_back(std::norm(d.direct[0](0, 0)));
  return std::abs(solve_dra(sc, DraUtility::MacWsr).report.objective - orc::ergodic_water_filling(gains, 1.5));
}

double check_two_point_diversity() {
  const RealVector one = RealVector::Ones(1);
  const DiversityEstimate d = interference_diversity_exact(one, 1.0, 1.0, {InterferenceLaw::TwoPoint, 1.0});
  const auto ref = orc::two_point_diversity(1.0, 1.0, 1.0);
  return std::max(std::abs(d.constant - ref.constant), std::abs(d.fluctuating - ref.fluctuating));
}

double check_ic_decoupled() {
  FadingProcess f = seeded(26);
  f.cross_variance = 0.0;
  const NetworkInstance inst = generate_instance(Topology::ic({2, 2}, {2, 2}, {1}), f);
  const IcProblem p = IcProblem::from_instance(inst, {1.0, 1.0}, {0.4});
  const IcResult r = solve_ic_wsr(p, PipcSplit::equal(p.interference, 2));
  double solo = 0.0;
  for (std::size_t k = 0; k < 2; ++k) {
    CapacityProblem c;
    c.channel = p.direct[k];
    c.pu_channels = p.pu_channels[k];
    c.power = 1.0;
    c.interference = {0.2};
    solo += solve_capacity(c).objective;
  }
  return std::abs(r.report.objective - solo);
}

}  // namespace

bool run_selftest(std::ostream& out) {
  struct Check {
    const char* name;
    std::function<double()> error;
    double tolerance;
  };
  const std::vector<Check> checks = {
      {"rate matches cofactor determinant", check_rate_determinant, 1e-10},
      {"interference matches direct expansion", check_interference_expansion, 1e-10},
      {"water-filling beats random covariances", check_water_fill, 1e-9},
      {"capacity matches covariance grid", check_capacity_grid, 1e-2},
      {"MAC weighted sum-rate matches power grid", check_mac_grid, 1e-2},
      {"BC weighted sum-rate matches power grid", check_bc_grid, 1e-2},
      {"single-user balancing matches closed form", check_balance_closed_form, 1e-4},
      {"fading allocation matches ergodic water-filling", check_ergodic_water_filling, 1e-4},
      {"two-point diversity matches direct evaluation", check_two_point_diversity, 1e-12},
      {"decoupled links reach their solo capacity", check_ic_decoupled, 1e-4},
  };
  bool all = true;
  for (const auto& c : checks) {
    double err = 0.0;
    std::string note;
    try {
      err = c.error();
    } catch (const std::exception& e) {
      err = std::numeric_limits<double>::infinity();
      note = std::string(" (") + e.what() + ")";
    }
    const bool pass = err <= c.tolerance;
    all = all && pass;
    out << (pass ? "PASS " : "FAIL ") << c.name << ": error " << format_number(err) << " <= "
        << format_number(c.tolerance) << note << "\n";
  }
  return all;
}

}  // namespace crdra::tools
