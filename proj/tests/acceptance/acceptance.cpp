// SPDX-License-Identifier: Apache-2.0
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "crdra/bc.hpp"
#include "crdra/dra.hpp"
#include "crdra/ic.hpp"
#include "crdra/mac.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"
#include "crdra/oracles/algebra.hpp"
#include "crdra/oracles/search.hpp"
#include "crdra/tools/config.hpp"
#include "crdra/tools/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

using namespace crdra;
namespace orc = crdra::oracles;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int number, const std::string& name, double budget_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_seconds > 0.0 && seconds > budget_seconds) {
    v.pass = false;
    v.detail += "; over the time budget";
  }
  if (!v.pass) ++failures;
  char time_text[32];
  std::snprintf(time_text, sizeof time_text, "%.1fs", seconds);
  std::cout << (v.pass ? "PASS" : "FAIL") << " [" << number << "] " << name << " (" << time_text << "): " << v.detail
            << std::endl;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

FadingProcess seeded(std::uint64_t seed) {
  FadingProcess f;
  f.seed = seed;
  return f;
}

Index pick_count(std::mt19937_64& rng, Index lo, Index hi) { return std::uniform_int_distribution<Index>(lo, hi)(rng); }

double pick(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::vector<Index> pick_counts(std::mt19937_64& rng, std::size_t n, Index lo, Index hi) {
  std::vector<Index> v(n);
  for (auto& x : v) x = pick_count(rng, lo, hi);
  return v;
}

std::vector<double> picks(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = pick(rng, lo, hi);
  return v;
}

Verdict fig2_claims() {
  std::size_t crossing = 0;
  double worst_slack = kInf;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    tools::ExperimentConfig c = tools::default_fig2_config();
    c.seed = seed;
    const auto points = tools::fig2_sweep(c);
    for (const auto& p : points) {
      for (double r : p.projection) worst_slack = std::min(worst_slack, p.optimal - r);
    }
    auto best = [](const std::vector<double>& v) { return std::max_element(v.begin(), v.end()) - v.begin(); };
    if (best(points.back().projection) >= best(points.front().projection)) ++crossing;
  }
  return {worst_slack >= -1e-6 && crossing >= 8,
          "min(optimal - projection) = " + num(worst_slack) + " bits; argmax b rises on " + std::to_string(crossing) +
              "/10 seeds"};
}

Verdict p1_grid() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  std::size_t points = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const NetworkInstance inst = generate_instance(Topology::point_to_point(2, 2, {1}), seeded(100 + i));
    const double power = pick(rng, 0.5, 5.0);
    const double gamma = pick(rng, 0.05, 1.0);
    const CapacityProblem p = CapacityProblem::from_instance(inst, power, {gamma});
    const double solved = solve_capacity(p).objective;
    const auto grid = orc::p2p_covariance_grid(p.channel, p.pu_channels, power, {gamma}, 40);
    points = grid.points;
    worst = std::max(worst, std::abs(solved - grid.value));
  }
  return {worst <= 1e-2 && points >= 100000,
          "max |solver - grid| = " + num(worst) + " bits over 20 instances, " + std::to_string(points) + " grid points"};
}

Verdict duality_gap() {
  std::mt19937_64 rng(303);
  double gap = 0.0;
  double violation = -kInf;
  double slack = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t pus = static_cast<std::size_t>(pick_count(rng, 1, 3));
    const NetworkInstance inst = generate_instance(
        Topology::point_to_point(pick_count(rng, 1, 4), pick_count(rng, 1, 4), pick_counts(rng, pus, 1, 2)),
        seeded(300 + i));
    const SolveReport r =
        solve_capacity(CapacityProblem::from_instance(inst, pick(rng, 0.5, 10.0), picks(rng, pus, 0.05, 1.0)));
    gap = std::max(gap, r.gap);
    violation = std::max(violation, r.max_relative_violation());
    slack = std::max(slack, r.max_slackness());
  }
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t users = static_cast<std::size_t>(pick_count(rng, 2, 3));
    const std::size_t pus = static_cast<std::size_t>(pick_count(rng, 1, 2));
    NetworkInstance inst = generate_instance(
        Topology::mac(pick_count(rng, 1, 3), pick_counts(rng, users, 1, 2), pick_counts(rng, pus, 1, 2)), seeded(400 + i));
    std::vector<double> w = picks(rng, users, 0.2, 1.0);
    std::sort(w.rbegin(), w.rend());
    MacProblem p = MacProblem::from_instance(inst, picks(rng, users, 0.5, 5.0), picks(rng, pus, 0.05, 1.0));
    p.weights = w;
    const SolveReport r = solve_mac_wsr(p);
    gap = std::max(gap, r.gap);
    violation = std::max(violation, r.max_relative_violation());
    slack = std::max(slack, r.max_slackness());
  }
  return {gap <= 1e-4 && violation <= 1e-6 && slack <= 1e-4,
          "100 instances: max gap " + num(gap) + " bits, max usage/budget - 1 " + num(violation) + ", max slackness " +
              num(slack)};
}

Verdict bc_consistency() {
  std::mt19937_64 rng(404);
  double worst = 0.0;
  double worst_single = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const std::size_t pus = static_cast<std::size_t>(pick_count(rng, 1, 2));
    const NetworkInstance inst =
        generate_instance(Topology::bc(pick_count(rng, 2, 3), pick_counts(rng, 2, 1, 2), pick_counts(rng, pus, 1, 2)),
                          seeded(500 + i));
    BcProblem p = BcProblem::from_instance(inst, pick(rng, 0.5, 5.0), picks(rng, pus, 0.05, 1.0));
    std::vector<double> w = picks(rng, 2, 0.2, 1.0);
    std::sort(w.rbegin(), w.rend());
    p.weights = w;
    const SolveReport r = solve_bc_wsr(p);
    const double rate = weighted_sum_rate_bc(p.channels, r.covariances, p.weights);
    worst = std::max(worst, std::abs(rate - r.dual_bound));

    const NetworkInstance solo = generate_instance(Topology::bc(3, {2}, {1}), seeded(600 + i));
    const double power = pick(rng, 0.5, 5.0);
    const double gamma = pick(rng, 0.05, 1.0);
    BcProblem q = BcProblem::from_instance(solo, power, {gamma});
    CapacityProblem c;
    c.channel = q.channels[0].adjoint();
    c.pu_channels = q.pu_channels;
    c.power = power;
    c.interference = {gamma};
    worst_single = std::max(worst_single, std::abs(solve_bc_wsr(q).objective - solve_capacity(c).objective));
  }
  return {worst <= 1e-3 && worst_single <= 1e-4,
          "max |BC rate - min F| = " + num(worst) + " bits; single-user max deviation " + num(worst_single) + " bits"};
}

Verdict sinr_balancing() {
  std::mt19937_64 rng(505);
  const double tol = 1e-5;
  double spread = 0.0;
  double grid_error = 0.0;
  std::size_t bracket_failures = 0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const bool small = i < 10;
    const std::size_t users = small ? 2 : static_cast<std::size_t>(pick_count(rng, 2, 3));
    const Index m = small ? 2 : pick_count(rng, 3, 4);
    const std::size_t pus = small ? 1 : static_cast<std::size_t>(pick_count(rng, 1, 2));
    const double power = pick(rng, 0.5, 5.0);
    const std::vector<double> gamma = picks(rng, pus, 0.05, 1.0);
    const NetworkInstance inst =
        generate_instance(Topology::bc(m, std::vector<Index>(users, 1), std::vector<Index>(pus, 1)), seeded(700 + i));
    const MisoBcProblem p = MisoBcProblem::from_instance(inst, power, gamma);
    const BalanceResult r = solve_sinr_balancing(p, tol);
    spread = std::max(spread, (r.sinr.maxCoeff() - r.sinr.minCoeff()) / std::max(r.alpha_star, 1e-12));

    std::vector<orc::CVector> h(p.channels.begin(), p.channels.end());
    const BalanceCheck below = check_balance_feasible(p, r.alpha_star - tol);
    bool ok = below.status == Feasibility::Feasible;
    if (ok) {
      std::vector<orc::CVector> v(below.beamformers.begin(), below.beamformers.end());
      ok = orc::beamformers_achieve(h, v, p.pu_channels, power, gamma, r.alpha_star - tol, 1e-6);
    }
    const double above = r.alpha_star + 10 * tol;
    ok = ok && check_balance_feasible(p, above).status == Feasibility::Infeasible;
    if (small) {
      const auto grid = orc::balance_direction_grid(p.channels[0], p.channels[1], p.pu_channels[0], power, gamma[0], 16);
      grid_error = std::max(grid_error, std::abs(grid.value - r.alpha_star));
      ok = ok && grid.value <= above;
    }
    if (!ok) ++bracket_failures;
  }
  return {spread <= 1e-4 && bracket_failures == 0 && grid_error <= 2e-2,
          "max relative SINR spread " + num(spread) + "; bracket failures " + std::to_string(bracket_failures) +
              "/20; max |alpha* - grid| on K=2, M=2 " + num(grid_error)};
}

Verdict ic_iteration() {
  std::mt19937_64 rng(606);
  std::size_t non_monotone = 0;
  double worst_violation = -kInf;
  double worst_decoupled = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    const std::size_t users = static_cast<std::size_t>(pick_count(rng, 2, 3));
    const std::size_t pus = static_cast<std::size_t>(pick_count(rng, 1, 2));
    const NetworkInstance inst =
        generate_instance(Topology::ic(pick_counts(rng, users, 1, 2), pick_counts(rng, users, 1, 2), pick_counts(rng, pus, 1, 2)),
                          seeded(800 + i));
    IcProblem p = IcProblem::from_instance(inst, picks(rng, users, 0.5, 5.0), picks(rng, pus, 0.05, 1.0));
    const PipcSplit split = PipcSplit::equal(p.interference, users);
    IcOptions o;
    o.strategy = i % 2 == 0 ? IcStrategy::OwnRate : IcStrategy::Weighted;
    const IcResult r = solve_ic_wsr(p, split, o);
    for (std::size_t c = 1; c < r.history.size(); ++c) {
      if (r.history[c] < r.history[c - 1] - 10 * o.tolerance) ++non_monotone;
    }
    worst_violation = std::max(worst_violation, r.worst_iterate_violation);

    for (auto& row : p.cross) {
      for (auto& c : row) c.setZero();
    }
    const IcResult d = solve_ic_wsr(p, split);
    double solo = 0.0;
    for (std::size_t k = 0; k < users; ++k) {
      CapacityProblem c;
      c.channel = p.direct[k];
      c.pu_channels = p.pu_channels[k];
      c.power = p.power[k];
      for (std::size_t j = 0; j < pus; ++j) c.interference.push_back(split.budget[j][k]);
      solo += solve_capacity(c).objective;
    }
    worst_decoupled = std::max(worst_decoupled, std::abs(d.report.objective - solo));
  }
  return {non_monotone == 0 && worst_violation <= 1e-6 && worst_decoupled <= 1e-4,
          "decreasing cycles " + std::to_string(non_monotone) + "; worst iterate usage/budget - 1 " +
              num(worst_violation) + "; decoupled max deviation " + num(worst_decoupled) + " bits"};
}

Verdict tdma_optimality() {
  FadingProcess f = seeded(909);
  f.dimensions = 1000;
  const FadingScenario s = FadingScenario::generate(Topology::mac(1, {1, 1}, {}), f, {1.0, 1.0}, {});
  const double full = solve_dra(s, DraUtility::MacWsr).report.objective;
  const double tdma = solve_dra(s, DraUtility::TdmaSumRate).report.objective;
  const double rel = (full - tdma) / full;
  return {std::abs(rel) <= 1e-2, "sum-rate " + num(full) + " vs TDMA " + num(tdma) + " bits, relative gap " + num(rel)};
}

Verdict interference_diversity_check() {
  const RealVector gains = rayleigh_power_gains(100000, 17);
  const DiversityEstimate mc = interference_diversity(gains, 1.0, 1.0, {InterferenceLaw::Exponential, 1.0}, 18);
  const double z = (mc.fluctuating - mc.constant) / mc.difference_se;
  const DiversityEstimate exact =
      interference_diversity_exact(RealVector::Ones(1), 1.0, 1.0, {InterferenceLaw::TwoPoint, 1.0});
  const bool two_point = std::abs(exact.constant - 0.585) <= 1e-3 && std::abs(exact.fluctuating - 0.708) <= 1e-3;
  return {z > 3.0 && two_point, "exponential law: difference " + num(mc.fluctuating - mc.constant) + " bits = " +
                                    num(z) + " standard errors; two-point " + num(exact.constant) + " / " +
                                    num(exact.fluctuating)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Verdict cli_determinism() {
  const fs::path work = fs::path(CRDRA_WORK_DIR) / "acceptance_cli";
  fs::create_directories(work);
  std::size_t differing = 0;
  std::size_t failed = 0;
  for (const std::string& name : tools::kExperiments) {
    const fs::path config = fs::path(CRDRA_CONFIG_DIR) / (name + ".json");
    std::string outputs[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = work / (name + "_" + std::to_string(run) + ".csv");
      fs::remove(out);
      const std::string cmd = std::string("\"") + CRDRA_CLI_PATH + "\" " + name + " --config \"" + config.string() +
                              "\" --seed 2024 --out \"" + out.string() + "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) ++failed;
      outputs[run] = slurp(out);
    }
    if (outputs[0].empty() || outputs[0] != outputs[1]) ++differing;
  }
  const std::size_t total = tools::kExperiments.size();
  return {differing == 0 && failed == 0, std::to_string(total - differing) + "/" + std::to_string(total) +
                                             " experiments byte-identical across two runs; nonzero exits " +
                                             std::to_string(failed)};
}

}  // namespace

int main() {
  criterion(1, "reference sweep: optimum dominates projections, nulling grows with power", 300, fig2_claims);
  criterion(2, "single-link capacity vs covariance grid", 120, p1_grid);
  criterion(3, "duality gap, feasibility and slackness (single link and MAC)", 0, duality_gap);
  criterion(4, "broadcast/dual-MAC consistency", 0, bc_consistency);
  criterion(5, "SINR balancing", 0, sinr_balancing);
  criterion(6, "interference-channel iteration", 0, ic_iteration);
  criterion(7, "TDMA optimality for the ergodic sum-rate", 180, tdma_optimality);
  criterion(8, "interference diversity", 0, interference_diversity_check);
  criterion(9, "CLI determinism", 0, cli_determinism);
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
