// SPDX-License-Identifier: Apache-2.0
#include "crdra/dual_solver.hpp"

#include "crdra/errors.hpp"

#include <algorithm>
#include <cmath>

namespace crdra {

double SolveReport::max_slackness() const {
  double worst = 0.0;
  for (const auto& c : constraints) worst = std::max(worst, std::abs(c.slackness()));
  return worst;
}

double SolveReport::max_relative_violation() const {
  double worst = -kInf;
  for (const auto& c : constraints) {
    if (c.budget > 0.0 && std::isfinite(c.budget)) worst = std::max(worst, c.usage / c.budget - 1.0);
  }
  return constraints.empty() ? 0.0 : worst;
}

double max_feasible_step(const RealVector& usage_from, const RealVector& usage_to, const RealVector& budgets) {
  double t = 1.0;
  for (Index i = 0; i < budgets.size(); ++i) {
    const double rise = usage_to(i) - usage_from(i);
    if (usage_to(i) > budgets(i) && rise > 0.0) {
      t = std::min(t, std::max(0.0, (budgets(i) - usage_from(i)) / rise));
    }
  }
  return t;
}

namespace {

/// Factor in [0, 1] that makes `usage` feasible when applied to a point whose
/// usages are linear and homogeneous.
double feasibility_scale(const RealVector& usage, const RealVector& budgets) {
  double factor = 1.0;
  for (Index i = 0; i < budgets.size(); ++i) {
    if (usage(i) <= budgets(i)) continue;
    factor = std::min(factor, budgets(i) > 0.0 ? budgets(i) / usage(i) : 0.0);
  }
  return factor;
}

/// Golden-section maximization of a unimodal function on [0, hi].
template <typename F>
std::pair<double, double> golden_max(F&& f, double hi, int iterations) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = 0.0;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < iterations; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double fb = f(hi);
  if (fb >= std::max(f1, f2)) return {hi, fb};
  return f1 >= f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

SolveReport solve_dual(const DualProblem& problem, const DualOptions& options) {
  const Index n = problem.budgets.size();
  for (Index i = 0; i < n; ++i) {
    if (!(problem.budgets(i) >= 0.0) || !std::isfinite(problem.budgets(i))) {
      throw DomainError("solve_dual: budgets must be finite and nonnegative");
    }
  }

  SolveReport report;
  const RealVector& budgets = problem.budgets;

  auto finish_constraints = [&](const RealVector& usage, const RealVector& multipliers) {
    report.constraints.clear();
    for (Index i = 0; i < n; ++i) {
      ConstraintReport c;
      c.label = i < static_cast<Index>(problem.labels.size()) ? problem.labels[i] : "c" + std::to_string(i);
      c.budget = budgets(i);
      c.usage = usage(i);
      c.multiplier = multipliers(i);
      report.constraints.push_back(std::move(c));
    }
    report.multipliers = multipliers;
  };

  if (n == 0) {
    const auto eval = problem.evaluate(RealVector());
    report.covariances = eval.point;
    report.objective = problem.objective(eval.point);
    report.objective_unscaled = report.objective;
    report.dual_bound = eval.value;
    report.gap = std::max(0.0, report.dual_bound - report.objective);
    report.converged = report.gap <= options.tolerance;
    report.regularized = eval.regularized;
    report.iterations = 1;
    finish_constraints(RealVector(), RealVector());
    return report;
  }

  RealVector center = options.initial_center.size() == n ? options.initial_center : RealVector::Ones(n);
  double radius = options.initial_radius;
  if (!(radius > 0.0)) {
    double min_budget = kInf;
    for (Index i = 0; i < n; ++i) {
      if (budgets(i) > 0.0) min_budget = std::min(min_budget, budgets(i));
    }
    radius = 10.0 * std::max(1.0, std::isfinite(min_budget) ? 1.0 / min_budget : 1.0);
  }

  std::vector<HalfSpace> domain;
  for (Index i = 0; i < n; ++i) {
    HalfSpace h;
    h.normal = -RealVector::Unit(n, i);
    h.offset = 0.0;
    domain.push_back(std::move(h));
  }
  domain.insert(domain.end(), options.extra_domain.begin(), options.extra_domain.end());

  auto violated = [&](const RealVector& x) -> const HalfSpace* {
    const HalfSpace* worst = nullptr;
    double worst_excess = 0.0;
    for (const auto& h : domain) {
      const double excess = (h.normal.dot(x) - h.offset) / std::max(h.normal.norm(), 1e-300);
      if (excess > worst_excess) {
        worst_excess = excess;
        worst = &h;
      }
    }
    return worst;
  };

  double best_dual = kInf;
  RealVector best_eta = center;
  CovarianceSet best_dual_point;
  double best_primal = -kInf;
  CovarianceSet best_point;
  RealVector best_point_usage;
  const bool blend = options.recovery == PrimalRecovery::ScaleAndBlend;

  auto consider_primal = [&](const CovarianceSet& point, const RealVector& usage) {
    const double factor = feasibility_scale(usage, budgets);
    CovarianceSet scaled = point.scaled(factor);
    const double value = problem.objective(scaled);
    if (value > best_primal) {
      best_primal = value;
      best_point = std::move(scaled);
      best_point_usage = usage * factor;
    }
    if (blend && best_point.users() > 0) {
      const double t_max = max_feasible_step(best_point_usage, usage, budgets);
      if (t_max > 0.0) {
        const CovarianceSet anchor = best_point;
        const RealVector anchor_usage = best_point_usage;
        auto along = [&](double t) { return problem.objective(CovarianceSet::blend(anchor, point, t)); };
        const auto [t, value_t] = golden_max(along, t_max, 30);
        if (value_t > best_primal) {
          best_primal = value_t;
          best_point = CovarianceSet::blend(anchor, point, t);
          best_point_usage = (1.0 - t) * anchor_usage + t * usage;
        }
      }
    }
  };

  auto evaluate_at = [&](const RealVector& eta) {
    auto eval = problem.evaluate(eta);
    if (eval.regularized) report.regularized = true;
    RealVector usage = problem.usage(eval.point);
    return std::tuple{std::move(eval), std::move(usage)};
  };

  // Widen the initial ball so it provably contains an optimal multiplier:
  // for a Slater point S0 with slack s, sum_i eta*_i s_i <= d(eta) - f(S0).
  if (problem.slater_point) {
    const RealVector slater_usage = problem.usage(*problem.slater_point);
    const RealVector slack = budgets - slater_usage;
    if (slack.minCoeff() <= 0.0) throw InfeasibleError("solve_dual: supplied Slater point is not strictly feasible");
    const double f0 = problem.objective(*problem.slater_point);
    if (f0 > best_primal) {
      best_primal = f0;
      best_point = *problem.slater_point;
      best_point_usage = slater_usage;
    }
    if (!violated(center)) {
      auto [eval, usage] = evaluate_at(center);
      const double excess = std::max(0.0, eval.value - f0);
      const double bound = (excess * slack.cwiseInverse()).norm();
      radius = std::max(radius, 1.01 * (center.norm() + bound));
    }
  }

  Ellipsoid ellipsoid(center, radius);
  const std::size_t max_cuts = 20 * options.max_iterations + 100;
  std::size_t cuts = 0;
  std::size_t evaluations = 0;

  while (evaluations < options.max_iterations && cuts < max_cuts) {
    ++cuts;
    const RealVector& c = ellipsoid.center();
    if (const HalfSpace* h = violated(c)) {
      const double depth = h->normal.dot(c) - h->offset;
      if (!ellipsoid.cut(h->normal, depth)) {
        report.warnings.push_back("ellipsoid emptied by a domain cut");
        break;
      }
      continue;
    }

    ++evaluations;
    auto [eval, usage] = evaluate_at(c);
    const RealVector subgradient = budgets - usage;
    if (eval.value < best_dual) {
      best_dual = eval.value;
      best_eta = c;
      best_dual_point = eval.point;
    }
    consider_primal(eval.point, usage);

    if (options.record_trace) {
      report.trace.push_back({evaluations, eval.value, best_dual, best_primal});
    }
    if (best_dual - best_primal <= options.tolerance) {
      report.converged = true;
      break;
    }
    if (subgradient.norm() <= 1e-14) {
      report.warnings.push_back("zero subgradient: dual optimum reached but primal recovery left a gap");
      break;
    }
    const double depth = options.deep_cuts ? std::max(0.0, eval.value - best_dual) : 0.0;
    if (!ellipsoid.cut(subgradient, depth)) {
      report.warnings.push_back("ellipsoid degenerated before the gap closed");
      break;
    }
  }

  if (!report.converged && evaluations >= options.max_iterations) {
    report.warnings.push_back("iteration limit reached before the duality gap closed");
  }
  if (best_point.users() == 0) throw NumericalError("solve_dual: no primal point was recovered");

  report.iterations = evaluations;
  report.covariances = best_point;
  report.objective = best_primal;
  report.objective_unscaled = best_dual_point.users() > 0 ? problem.objective(best_dual_point) : best_primal;
  report.dual_bound = best_dual;
  report.gap = best_dual - best_primal;
  finish_constraints(best_point_usage, best_eta);
  return report;
}

}  // namespace crdra
