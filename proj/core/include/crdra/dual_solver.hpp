// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/ellipsoid.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace crdra {

/// Maximizer of the Lagrangian (or of any relaxation whose value upper-bounds
/// the primal) at a given multiplier vector, together with that value.
struct DualEvaluation {
  CovarianceSet point;
  double value = 0.0;
  bool regularized = false;
};

/// A primal problem max f(S) s.t. usage_i(S) <= budget_i, i = 0..n-1, with
/// linear usages, handled through its dual function d(eta).
///
/// The driver minimizes d over the multiplier domain with the ellipsoid
/// method. The subgradient at eta is budget - usage(S*(eta)).
struct DualProblem {
  std::vector<std::string> labels;
  RealVector budgets;
  std::function<DualEvaluation(const RealVector&)> evaluate;
  std::function<RealVector(const CovarianceSet&)> usage;
  std::function<double(const CovarianceSet&)> objective;
  /// Strictly feasible point; bounds the optimal multipliers so the initial
  /// ball can be widened to contain them.
  std::optional<CovarianceSet> slater_point;
};

enum class PrimalRecovery {
  Scale,            // shrink S*(eta) onto the feasible set
  ScaleAndBlend,    // also line-search toward the incumbent (concave objectives only)
};

struct DualOptions {
  double tolerance = 1e-5;
  std::size_t max_iterations = 500;
  /// Ball radius; zero selects 10 * max(1, 1 / min budget).
  double initial_radius = 0.0;
  /// Ball center; empty selects the all-ones vector.
  RealVector initial_center;
  PrimalRecovery recovery = PrimalRecovery::Scale;
  /// Constraints on the multipliers beyond nonnegativity.
  std::vector<HalfSpace> extra_domain;
  /// Deep objective cuts need a convex dual; quasi-convex ones use central cuts.
  bool deep_cuts = true;
  bool record_trace = true;
};

SolveReport solve_dual(const DualProblem& problem, const DualOptions& options);

/// Largest t in [0, 1] such that (1 - t) u_from + t u_to <= budget, given
/// u_from <= budget.
double max_feasible_step(const RealVector& usage_from, const RealVector& usage_to, const RealVector& budgets);

}  // namespace crdra
