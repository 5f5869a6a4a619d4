// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/dual_solver.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <vector>

namespace crdra {

/// K interfering links; receivers treat the other links as Gaussian noise.
struct IcProblem {
  std::vector<ChannelMatrix> direct;                   // H_kk, B_k x A_k
  std::vector<std::vector<ChannelMatrix>> cross;       // [i][k] H_ik from TX i to RX k, B_k x A_i
  std::vector<std::vector<ChannelMatrix>> pu_channels;  // [k][j] E_kj, D_j x A_k
  std::vector<double> weights;
  std::vector<double> power;         // P_k > 0
  std::vector<double> interference;  // Gamma_j >= 0; +inf disables

  static IcProblem from_instance(const NetworkInstance& instance, std::vector<double> power,
                                 std::vector<double> interference);
  void validate() const;
  std::size_t users() const { return direct.size(); }
};

/// Per-link shares of each interference budget: budget[j][k].
struct PipcSplit {
  std::vector<std::vector<double>> budget;

  static PipcSplit equal(const std::vector<double>& interference, std::size_t users);
  /// Throws DomainError unless shares are nonnegative and sum to at most Gamma_j.
  void validate(const std::vector<double>& interference, std::size_t users) const;
};

RealVector ic_user_rates(const IcProblem& problem, const CovarianceSet& r);
double weighted_sum_rate_ic(const IcProblem& problem, const CovarianceSet& r);

enum class IcStrategy {
  OwnRate,   // each link maximizes its own rate
  Weighted,  // each link maximizes the weighted sum-rate linearized in the others
};

struct IcOptions {
  IcStrategy strategy = IcStrategy::OwnRate;
  double tolerance = 1e-5;  // weighted sum-rate change over one cycle
  std::size_t max_cycles = 200;
  DualOptions subproblem;
};

struct IcResult {
  SolveReport report;               // objective = weighted sum-rate of the best iterate
  RealVector user_rates;
  std::vector<double> history;      // weighted sum-rate after each cycle, starting from R = 0
  double worst_iterate_violation = 0.0;  // max over iterates and PUs of usage / Gamma_j - 1
  std::size_t damped_steps = 0;     // link updates shortened to keep the sum-rate monotone
  PipcSplit split;
};

/// Cyclic per-link optimization under a fixed split of the interference
/// budgets. A link update that would lower the weighted sum-rate is replaced
/// by the best point on the segment toward it (or skipped), so the sum-rate
/// never decreases.
IcResult solve_ic_wsr(const IcProblem& problem, const PipcSplit& split, const IcOptions& options = {});

struct SplitSearch {
  PipcSplit best;
  double best_objective = 0.0;
  double equal_objective = 0.0;
  std::size_t evaluated = 0;
};

/// Evaluates solve_ic_wsr on every split whose shares are multiples of
/// Gamma_j / resolution (plus the equal split) and keeps the best.
SplitSearch search_split(const IcProblem& problem, std::size_t resolution, const IcOptions& options = {});

}  // namespace crdra
