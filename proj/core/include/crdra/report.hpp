// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/types.hpp"

#include <string>
#include <vector>

namespace crdra {

struct ConstraintReport {
  std::string label;
  double budget = 0.0;
  double usage = 0.0;
  double multiplier = 0.0;

  /// multiplier * (budget - usage); zero at an exact KKT point.
  double slackness() const { return multiplier * (budget - usage); }
};

struct IterationRecord {
  std::size_t iteration = 0;
  double dual_value = 0.0;
  double best_dual = 0.0;
  double best_primal = 0.0;
};

/// Outcome of a dual-method solve.
///
/// `objective` always belongs to the feasible covariances in `covariances`;
/// `dual_bound` is the lowest dual value seen, so `gap` is a certified
/// optimality gap whenever the inner maximizations were exact.
struct SolveReport {
  double objective = 0.0;
  double objective_unscaled = 0.0;
  double dual_bound = 0.0;
  double gap = 0.0;
  CovarianceSet covariances;
  std::vector<ConstraintReport> constraints;
  RealVector multipliers;
  std::size_t iterations = 0;
  bool converged = false;
  bool regularized = false;
  bool zero_only = false;  // the budgets admit no covariance other than zero
  std::vector<std::string> warnings;
  std::vector<IterationRecord> trace;

  double max_slackness() const;
  /// Largest usage/budget - 1 over constraints with a positive budget.
  double max_relative_violation() const;
};

}  // namespace crdra
