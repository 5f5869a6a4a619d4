// SPDX-License-Identifier: Apache-2.0
#include "crdra/ic.hpp"

#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"
#include "crdra/p2p.hpp"

#include <algorithm>
#include <cmath>

namespace crdra {

IcProblem IcProblem::from_instance(const NetworkInstance& instance, std::vector<double> power,
                                   std::vector<double> interference) {
  if (instance.role != Role::IC && instance.role != Role::P2P) throw DomainError("ic: instance role is not IC");
  IcProblem p;
  p.direct = instance.direct;
  p.cross = instance.cross;
  if (p.cross.empty()) p.cross.assign(instance.users(), std::vector<ChannelMatrix>(instance.users()));
  p.pu_channels = instance.pu;
  if (p.pu_channels.empty()) p.pu_channels.assign(instance.users(), {});
  p.weights = instance.weights.empty() ? std::vector<double>(instance.users(), 1.0) : instance.weights;
  p.power = std::move(power);
  p.interference = std::move(interference);
  return p;
}

void IcProblem::validate() const {
  const std::size_t k_count = direct.size();
  if (k_count == 0) throw DomainError("ic: no links");
  if (cross.size() != k_count || pu_channels.size() != k_count) throw DomainError("ic: channel tables have wrong size");
  if (weights.size() != k_count || power.size() != k_count) throw DomainError("ic: one weight and power budget per link");
  for (std::size_t k = 0; k < k_count; ++k) {
    if (direct[k].rows() < 1 || direct[k].cols() < 1 || !all_finite(direct[k])) throw DomainError("ic: bad direct channel");
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) throw DomainError("ic: weights must be finite and nonnegative");
    if (!(power[k] > 0.0) || !std::isfinite(power[k])) throw DomainError("ic: power budgets must be positive and finite");
    if (cross[k].size() != k_count) throw DomainError("ic: ragged cross-channel table");
    for (std::size_t i = 0; i < k_count; ++i) {
      if (i == k) continue;
      const auto& c = cross[k][i];
      if (c.rows() != direct[i].rows() || c.cols() != direct[k].cols() || !all_finite(c)) {
        throw DomainError("ic: cross channel shape mismatch");
      }
    }
    if (pu_channels[k].size() != interference.size()) throw DomainError("ic: one interference budget per PU is required");
    for (const auto& e : pu_channels[k]) {
      if (e.cols() != direct[k].cols() || !all_finite(e)) throw DomainError("ic: PU channel shape mismatch");
    }
  }
  for (double g : interference) {
    if (!(g >= 0.0)) throw DomainError("ic: interference budgets must be nonnegative");
  }
}

PipcSplit PipcSplit::equal(const std::vector<double>& interference, std::size_t users) {
  PipcSplit s;
  for (double g : interference) s.budget.push_back(std::vector<double>(users, g / static_cast<double>(users)));
  return s;
}

void PipcSplit::validate(const std::vector<double>& interference, std::size_t users) const {
  if (budget.size() != interference.size()) throw DomainError("split: one row per PU is required");
  for (std::size_t j = 0; j < budget.size(); ++j) {
    if (budget[j].size() != users) throw DomainError("split: one share per link is required");
    double total = 0.0;
    for (double b : budget[j]) {
      if (!(b >= 0.0)) throw DomainError("split: shares must be nonnegative");
      total += b;
    }
    if (std::isfinite(interference[j]) && total > interference[j] * (1.0 + 1e-12)) {
      throw DomainError("split: shares of PU " + std::to_string(j + 1) + " exceed its budget");
    }
  }
}

namespace {

Matrix noise_plus_interference(const IcProblem& p, const CovarianceSet& r, std::size_t k) {
  const Index b = p.direct[k].rows();
  Matrix omega = Matrix::Identity(b, b);
  for (std::size_t i = 0; i < p.users(); ++i) {
    if (i != k) omega += p.cross[i][k] * r(i) * p.cross[i][k].adjoint();
  }
  return hermitian_part(omega);
}

double worst_pipc(const IcProblem& p, const CovarianceSet& r) {
  double worst = -kInf;
  for (std::size_t j = 0; j < p.interference.size(); ++j) {
    double usage = 0.0;
    for (std::size_t k = 0; k < p.users(); ++k) usage += interference_power(p.pu_channels[k][j], r(k));
    const double g = p.interference[j];
    if (!std::isfinite(g)) continue;
    worst = std::max(worst, g > 0.0 ? usage / g - 1.0 : usage);
  }
  return worst;
}

}  // namespace

RealVector ic_user_rates(const IcProblem& problem, const CovarianceSet& r) {
  const std::size_t k_count = problem.users();
  if (r.users() != k_count) throw DomainError("ic: covariance set has wrong shape");
  RealVector rates(static_cast<Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    if (r(k).rows() != problem.direct[k].cols()) throw DomainError("ic: covariance size differs from A_k");
    require_psd(r(k), "ic covariance");
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    const Matrix omega = noise_plus_interference(problem, r, k);
    const auto& h = problem.direct[k];
    rates(static_cast<Index>(k)) = std::max(0.0, log2det(hermitian_part(omega + h * r(k) * h.adjoint())) - log2det(omega));
  }
  return rates;
}

double weighted_sum_rate_ic(const IcProblem& problem, const CovarianceSet& r) {
  const RealVector rates = ic_user_rates(problem, r);
  double acc = 0.0;
  for (Index k = 0; k < rates.size(); ++k) acc += problem.weights[static_cast<std::size_t>(k)] * rates(k);
  return acc;
}

IcResult solve_ic_wsr(const IcProblem& problem, const PipcSplit& split, const IcOptions& options) {
  problem.validate();
  const std::size_t k_count = problem.users();
  const std::size_t j_count = problem.interference.size();
  split.validate(problem.interference, k_count);

  IcResult out;
  out.split = split;
  std::vector<Index> sizes;
  for (const auto& h : problem.direct) sizes.push_back(h.cols());
  CovarianceSet r = CovarianceSet::zeros(sizes);
  double current = weighted_sum_rate_ic(problem, r);
  out.history.push_back(current);
  out.worst_iterate_violation = worst_pipc(problem, r);

  bool converged = false;
  std::size_t cycle = 0;
  for (; cycle < options.max_cycles; ++cycle) {
    const double start = current;
    for (std::size_t k = 0; k < k_count; ++k) {
      const Matrix omega = noise_plus_interference(problem, r, k);
      CapacityProblem sub;
      sub.channel = hermitian_inv_sqrt(omega) * problem.direct[k];
      sub.pu_channels = problem.pu_channels[k];
      sub.power = problem.power[k];
      for (std::size_t j = 0; j < j_count; ++j) sub.interference.push_back(split.budget[j][k]);

      if (options.strategy == IcStrategy::Weighted) {
        const double mu = problem.weights[k];
        if (mu <= 0.0) continue;
        const Index a = problem.direct[k].cols();
        Matrix price = Matrix::Zero(a, a);
        for (std::size_t i = 0; i < k_count; ++i) {
          if (i == k || problem.weights[i] == 0.0) continue;
          const Matrix omega_i = noise_plus_interference(problem, r, i);
          const Matrix full_i = hermitian_part(omega_i + problem.direct[i] * r(i) * problem.direct[i].adjoint());
          const Index b = omega_i.rows();
          const Matrix diff = Eigen::LLT<Matrix>(omega_i).solve(Matrix::Identity(b, b)) -
                              Eigen::LLT<Matrix>(full_i).solve(Matrix::Identity(b, b));
          price += (problem.weights[i] / kLn2) * problem.cross[k][i].adjoint() * diff * problem.cross[k][i];
        }
        sub.price = psd_project(hermitian_part(price / mu));
      }

      SolveReport step = solve_capacity(sub, options.subproblem);
      const Matrix previous = r(k);
      r(k) = step.covariances(0);
      double updated = weighted_sum_rate_ic(problem, r);
      if (updated < current) {
        // Damped update: best of a halving sequence toward the candidate.
        const Matrix candidate = r(k);
        double best_value = current;
        Matrix best = previous;
        for (double t = 0.5; t > 1e-6; t *= 0.5) {
          r(k) = (1.0 - t) * previous + t * candidate;
          const double v = weighted_sum_rate_ic(problem, r);
          if (v > best_value) {
            best_value = v;
            best = r(k);
            break;
          }
        }
        r(k) = best;
        updated = best_value;
        ++out.damped_steps;
      }
      current = updated;
      out.worst_iterate_violation = std::max(out.worst_iterate_violation, worst_pipc(problem, r));
    }
    out.history.push_back(current);
    if (std::abs(current - start) < options.tolerance) {
      converged = true;
      ++cycle;
      break;
    }
  }

  SolveReport& report = out.report;
  report.covariances = r;
  report.objective = current;
  report.objective_unscaled = current;
  report.dual_bound = kInf;
  report.gap = kInf;
  report.iterations = cycle;
  report.converged = converged;
  if (!converged) report.warnings.push_back("cycle limit reached before the weighted sum-rate settled");
  for (std::size_t k = 0; k < k_count; ++k) {
    report.constraints.push_back({"ptpc_" + std::to_string(k + 1), problem.power[k], r(k).trace().real(), 0.0});
  }
  for (std::size_t j = 0; j < j_count; ++j) {
    double usage = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) usage += interference_power(problem.pu_channels[k][j], r(k));
    report.constraints.push_back({"pipc_" + std::to_string(j + 1), problem.interference[j], usage, 0.0});
  }
  out.user_rates = ic_user_rates(problem, r);
  return out;
}

namespace {

void compositions(std::size_t total, std::size_t parts, std::vector<std::size_t>& prefix,
                  std::vector<std::vector<std::size_t>>& out) {
  if (prefix.size() + 1 == parts) {
    std::size_t used = 0;
    for (auto p : prefix) used += p;
    prefix.push_back(total - used);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  std::size_t used = 0;
  for (auto p : prefix) used += p;
  for (std::size_t n = 0; n + used <= total; ++n) {
    prefix.push_back(n);
    compositions(total, parts, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

SplitSearch search_split(const IcProblem& problem, std::size_t resolution, const IcOptions& options) {
  problem.validate();
  if (resolution < 1) throw DomainError("search_split: resolution must be at least 1");
  const std::size_t k_count = problem.users();
  const std::size_t j_count = problem.interference.size();

  SplitSearch out;
  out.best = PipcSplit::equal(problem.interference, k_count);
  out.equal_objective = solve_ic_wsr(problem, out.best, options).report.objective;
  out.best_objective = out.equal_objective;
  out.evaluated = 1;
  if (j_count == 0) return out;

  std::vector<std::vector<std::size_t>> shares;
  std::vector<std::size_t> prefix;
  compositions(resolution, k_count, prefix, shares);

  std::vector<std::size_t> pick(j_count, 0);
  while (true) {
    PipcSplit split;
    for (std::size_t j = 0; j < j_count; ++j) {
      std::vector<double> row(k_count);
      for (std::size_t k = 0; k < k_count; ++k) {
        row[k] = std::isfinite(problem.interference[j])
                     ? problem.interference[j] * static_cast<double>(shares[pick[j]][k]) / static_cast<double>(resolution)
                     : kInf;
      }
      split.budget.push_back(std::move(row));
    }
    const double value = solve_ic_wsr(problem, split, options).report.objective;
    ++out.evaluated;
    if (value > out.best_objective) {
      out.best_objective = value;
      out.best = split;
    }
    std::size_t j = 0;
    while (j < j_count && ++pick[j] == shares.size()) pick[j++] = 0;
    if (j == j_count) break;
  }
  return out;
}

}  // namespace crdra
