// SPDX-License-Identifier: Apache-2.0
#include "crdra/dra.hpp"

#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"
#include "crdra/p2p.hpp"
#include "crdra/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace crdra {

FadingScenario FadingScenario::generate(const Topology& topology, const FadingProcess& fading,
                                        std::vector<double> power, std::vector<double> interference) {
  if (topology.role != Role::MAC) throw ConfigError("fading scenario: topology must be a multiple-access channel");
  if (fading.dimensions < 1) throw ConfigError("fading scenario: at least one dimension is required");
  FadingScenario s;
  for (std::size_t l = 0; l < fading.dimensions; ++l) s.dimensions.push_back(generate_instance(topology, fading, l));
  s.power = std::move(power);
  s.interference = std::move(interference);
  s.weights.assign(topology.users, 1.0);
  return s;
}

void FadingScenario::validate() const {
  if (dimensions.empty()) throw DomainError("fading scenario: no dimensions");
  const std::size_t k_count = users();
  for (const auto& d : dimensions) {
    d.validate();
    if (d.users() != k_count) throw DomainError("fading scenario: user count differs across dimensions");
    if (d.pus() != interference.size()) throw DomainError("fading scenario: one interference budget per PU is required");
    for (std::size_t k = 0; k < k_count; ++k) {
      if (d.direct[k].cols() != dimensions[0].direct[k].cols() || d.direct[k].rows() != dimensions[0].direct[k].rows()) {
        throw DomainError("fading scenario: antenna counts differ across dimensions");
      }
    }
  }
  if (power.size() != k_count) throw DomainError("fading scenario: one power budget per user is required");
  for (double p : power) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("fading scenario: power budgets must be positive and finite");
  }
  for (double g : interference) {
    if (!(g > 0.0)) throw DomainError("fading scenario: interference budgets must be positive");
  }
  if (weights.size() != k_count) throw DomainError("fading scenario: one weight per user is required");
}

Matrix penalty_matrix(const NetworkInstance& dimension, const DualPair& pair, std::size_t user) {
  const Index n = dimension.covariance_size(user);
  Matrix b = Matrix::Identity(n, n) * pair.nu(static_cast<Index>(user));
  for (Index j = 0; j < pair.delta.size(); ++j) {
    const auto& g = dimension.pu_channel(user, static_cast<std::size_t>(j));
    b += pair.delta(j) * g.adjoint() * g;
  }
  return hermitian_part(b);
}

TdmaChoice tdma_subproblem(const NetworkInstance& dimension, const DualPair& pair) {
  const std::size_t k_count = dimension.users();
  if (pair.nu.size() != static_cast<Index>(k_count) || pair.delta.size() != static_cast<Index>(dimension.pus())) {
    throw DomainError("tdma_subproblem: multiplier sizes do not match the instance");
  }
  if ((pair.nu.array() < 0.0).any() || (pair.delta.array() < 0.0).any()) {
    throw DomainError("tdma_subproblem: multipliers must be nonnegative");
  }
  TdmaChoice out;
  out.values = RealVector::Zero(static_cast<Index>(k_count));
  double best = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const Matrix b = penalty_matrix(dimension, pair, k);
    const auto& h = dimension.direct[k];
    Matrix s = water_fill_penalized(h, b).covariance;
    const double value = log2det_identity_plus(h * s * h.adjoint()) - (b * s).trace().real();
    out.values(static_cast<Index>(k)) = value;
    if (value > best) {
      best = value;
      out.user = k;
      out.covariance = std::move(s);
    }
  }
  out.value = best;
  return out;
}

DraResult solve_dra(const FadingScenario& scenario, DraUtility utility, const DualOptions& options,
                    const InnerOptions& inner) {
  scenario.validate();
  const std::size_t k_count = scenario.users();
  const std::size_t l_count = scenario.size();
  const std::size_t j_total = scenario.interference.size();
  const double inv_l = 1.0 / static_cast<double>(l_count);
  if (utility == DraUtility::MacWsr) {
    for (std::size_t k = 1; k < k_count; ++k) {
      if (scenario.weights[k] > scenario.weights[k - 1]) throw DomainError("dra: weights must be sorted nonincreasing");
    }
  }

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < j_total; ++j) {
    if (std::isfinite(scenario.interference[j])) active.push_back(j);
  }
  const Index n = static_cast<Index>(k_count + active.size());
  std::vector<Index> sizes;
  for (std::size_t k = 0; k < k_count; ++k) sizes.push_back(scenario.dimensions[0].covariance_size(k));

  DualProblem dp;
  dp.budgets.resize(n);
  for (std::size_t k = 0; k < k_count; ++k) {
    dp.labels.push_back("atpc_" + std::to_string(k + 1));
    dp.budgets(static_cast<Index>(k)) = scenario.power[k];
  }
  for (std::size_t a = 0; a < active.size(); ++a) {
    dp.labels.push_back("aipc_" + std::to_string(active[a] + 1));
    dp.budgets(static_cast<Index>(k_count + a)) = scenario.interference[active[a]];
  }

  dp.objective = [&](const CovarianceSet& s) {
    double acc = 0.0;
    for (std::size_t l = 0; l < l_count; ++l) {
      const auto& h = scenario.dimensions[l].direct;
      if (utility == DraUtility::MacWsr) {
        acc += weighted_sum_rate_mac(h, s, scenario.weights, l);
      } else {
        for (std::size_t k = 0; k < k_count; ++k) acc += log2det_identity_plus(h[k] * s(k, l) * h[k].adjoint());
      }
    }
    return acc * inv_l;
  };
  dp.usage = [&](const CovarianceSet& s) {
    RealVector u = RealVector::Zero(n);
    for (std::size_t l = 0; l < l_count; ++l) {
      const auto& d = scenario.dimensions[l];
      for (std::size_t k = 0; k < k_count; ++k) {
        u(static_cast<Index>(k)) += s(k, l).trace().real();
        for (std::size_t a = 0; a < active.size(); ++a) {
          u(static_cast<Index>(k_count + a)) += interference_power(d.pu_channel(k, active[a]), s(k, l));
        }
      }
    }
    return RealVector(u * inv_l);
  };

  CovarianceSet last;
  dp.evaluate = [&](const RealVector& eta) {
    DualPair pair;
    pair.nu = eta.head(static_cast<Index>(k_count));
    pair.delta = RealVector::Zero(static_cast<Index>(j_total));
    for (std::size_t a = 0; a < active.size(); ++a) pair.delta(static_cast<Index>(active[a])) = eta(static_cast<Index>(k_count + a));
    DualEvaluation e;
    e.point = CovarianceSet::zeros(sizes, l_count);
    for (std::size_t l = 0; l < l_count; ++l) {
      const auto& d = scenario.dimensions[l];
      if (utility == DraUtility::TdmaSumRate) {
        auto choice = tdma_subproblem(d, pair);
        if (choice.user) e.point(*choice.user, l) = std::move(choice.covariance);
        continue;
      }
      std::vector<Matrix> penalties(k_count);
      for (std::size_t k = 0; k < k_count; ++k) penalties[k] = penalty_matrix(d, pair, k);
      CovarianceSet warm;
      const bool have_warm = last.users() == k_count;
      if (have_warm) {
        warm = CovarianceSet(k_count, 1);
        for (std::size_t k = 0; k < k_count; ++k) warm(k) = last(k, l);
      }
      auto result = maximize_mac_lagrangian(d.direct, scenario.weights, penalties, have_warm ? &warm : nullptr, inner);
      e.regularized = e.regularized || result.regularized;
      for (std::size_t k = 0; k < k_count; ++k) e.point(k, l) = std::move(result.covariances(k));
    }
    if (utility == DraUtility::MacWsr) last = e.point;
    e.value = dp.objective(e.point) - eta.dot(dp.usage(e.point) - dp.budgets);
    return e;
  };

  double level = kInf;
  for (std::size_t k = 0; k < k_count; ++k) level = std::min(level, scenario.power[k] / static_cast<double>(sizes[k]));
  for (std::size_t a = 0; a < active.size(); ++a) {
    double total = 0.0;
    for (const auto& d : scenario.dimensions) {
      for (std::size_t k = 0; k < k_count; ++k) {
        const auto& g = d.pu_channel(k, active[a]);
        total += (g.adjoint() * g).trace().real();
      }
    }
    total *= inv_l;
    if (total > 0.0) level = std::min(level, scenario.interference[active[a]] / total);
  }
  // Only the MAC utility is concave; for TDMA the uniform point need not
  // belong to the utility's domain, so no Slater widening is used there.
  if (utility == DraUtility::MacWsr) {
    CovarianceSet slater(k_count, l_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      for (std::size_t l = 0; l < l_count; ++l) slater(k, l) = Matrix::Identity(sizes[k], sizes[k]) * (0.5 * level);
    }
    dp.slater_point = std::move(slater);
  }

  DualOptions opts = options;
  opts.recovery = utility == DraUtility::MacWsr ? PrimalRecovery::ScaleAndBlend : PrimalRecovery::Scale;
  DraResult out;
  out.report = solve_dual(dp, opts);

  std::vector<ConstraintReport> constraints(out.report.constraints.begin(), out.report.constraints.begin() + k_count);
  for (std::size_t j = 0; j < j_total; ++j) {
    ConstraintReport c{"aipc_" + std::to_string(j + 1), scenario.interference[j], 0.0, 0.0};
    for (std::size_t l = 0; l < l_count; ++l) {
      for (std::size_t k = 0; k < k_count; ++k) {
        c.usage += interference_power(scenario.dimensions[l].pu_channel(k, j), out.report.covariances(k, l));
      }
    }
    c.usage *= inv_l;
    const auto it = std::find(active.begin(), active.end(), j);
    if (it != active.end()) c.multiplier = out.report.multipliers(static_cast<Index>(k_count + (it - active.begin())));
    constraints.push_back(std::move(c));
  }
  out.report.constraints = std::move(constraints);
  out.relative_gap = out.report.gap / std::max(std::abs(out.report.objective), 1e-12);
  return out;
}

namespace {

DiversityEstimate summarize(const std::vector<double>& one, const std::vector<double>& two) {
  const std::size_t n = one.size();
  DiversityEstimate out;
  out.samples = n;
  double s1 = 0.0, s2 = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s1 += one[i];
    s2 += two[i];
    sd += two[i] - one[i];
  }
  const double nd = static_cast<double>(n);
  out.constant = s1 / nd;
  out.fluctuating = s2 / nd;
  const double md = sd / nd;
  if (n > 1) {
    double v1 = 0.0, v2 = 0.0, vd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v1 += (one[i] - out.constant) * (one[i] - out.constant);
      v2 += (two[i] - out.fluctuating) * (two[i] - out.fluctuating);
      const double d = two[i] - one[i] - md;
      vd += d * d;
    }
    out.constant_se = std::sqrt(v1 / (nd - 1.0) / nd);
    out.fluctuating_se = std::sqrt(v2 / (nd - 1.0) / nd);
    out.difference_se = std::sqrt(vd / (nd - 1.0) / nd);
  }
  return out;
}

void check_diversity_inputs(const RealVector& gains, double pu_power, double gamma, const InterferenceDistribution& d) {
  if (gains.size() == 0) throw DomainError("interference_diversity: empty sample set");
  if ((gains.array() < 0.0).any() || !gains.allFinite()) throw DomainError("interference_diversity: gains must be finite and nonnegative");
  if (!(pu_power >= 0.0) || !std::isfinite(pu_power)) throw DomainError("interference_diversity: PU power must be finite and nonnegative");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("interference_diversity: Gamma must be finite and nonnegative");
  if (!(d.spread >= 0.0 && d.spread <= 1.0)) throw DomainError("interference_diversity: two-point spread must lie in [0, 1]");
}

double pu_rate(double gain, double pu_power, double interference) {
  return std::log2(1.0 + gain * pu_power / (1.0 + interference));
}

}  // namespace

DiversityEstimate interference_diversity(const RealVector& pu_gains, double pu_power, double gamma,
                                         const InterferenceDistribution& distribution, std::uint64_t seed) {
  check_diversity_inputs(pu_gains, pu_power, gamma, distribution);
  std::mt19937_64 rng = seeded_engine(seed, 0x1d1);
  std::exponential_distribution<double> exponential(1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> one(pu_gains.size());
  std::vector<double> two(pu_gains.size());
  for (Index i = 0; i < pu_gains.size(); ++i) {
    double draw = gamma;
    switch (distribution.law) {
      case InterferenceLaw::Constant: break;
      case InterferenceLaw::Exponential: draw = gamma * exponential(rng); break;
      case InterferenceLaw::TwoPoint:
        draw = gamma * (coin(rng) ? 1.0 + distribution.spread : 1.0 - distribution.spread);
        break;
    }
    one[static_cast<std::size_t>(i)] = pu_rate(pu_gains(i), pu_power, gamma);
    two[static_cast<std::size_t>(i)] = pu_rate(pu_gains(i), pu_power, draw);
  }
  return summarize(one, two);
}

DiversityEstimate interference_diversity_exact(const RealVector& pu_gains, double pu_power, double gamma,
                                               const InterferenceDistribution& distribution) {
  check_diversity_inputs(pu_gains, pu_power, gamma, distribution);
  if (distribution.law == InterferenceLaw::Exponential) {
    throw DomainError("interference_diversity_exact: only discrete interference laws are supported");
  }
  std::vector<double> one(pu_gains.size());
  std::vector<double> two(pu_gains.size());
  for (Index i = 0; i < pu_gains.size(); ++i) {
    const double g = pu_gains(i);
    one[static_cast<std::size_t>(i)] = pu_rate(g, pu_power, gamma);
    two[static_cast<std::size_t>(i)] =
        distribution.law == InterferenceLaw::Constant
            ? pu_rate(g, pu_power, gamma)
            : 0.5 * (pu_rate(g, pu_power, gamma * (1.0 - distribution.spread)) +
                     pu_rate(g, pu_power, gamma * (1.0 + distribution.spread)));
  }
  return summarize(one, two);
}

RealVector rayleigh_power_gains(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng = seeded_engine(seed, 0x9a1);
  std::exponential_distribution<double> exponential(1.0);
  RealVector out(static_cast<Index>(count));
  for (Index i = 0; i < out.size(); ++i) out(i) = exponential(rng);
  return out;
}

PuCapacityCheck pu_capacity_constraint(const PuLinkModel& model, const RealVector& su_power) {
  const Index n = model.pu_gains.size();
  if (n == 0) throw DomainError("pu_capacity_constraint: no fading states");
  if (model.su_gains.size() != n || su_power.size() != n) {
    throw DomainError("pu_capacity_constraint: gain and power vectors must share the state indexing");
  }
  if ((model.pu_gains.array() < 0.0).any() || (model.su_gains.array() < 0.0).any()) {
    throw DomainError("pu_capacity_constraint: gains must be nonnegative");
  }
  if (!(model.pu_power >= 0.0)) throw DomainError("pu_capacity_constraint: PU power must be nonnegative");
  if ((su_power.array() < 0.0).any()) throw DomainError("pu_capacity_constraint: secondary power must be nonnegative");
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double interference = model.su_gains(i) == 0.0 ? 0.0 : model.su_gains(i) * su_power(i);
    acc += std::isfinite(interference) ? pu_rate(model.pu_gains(i), model.pu_power, interference) : 0.0;
  }
  PuCapacityCheck out;
  out.value = acc / static_cast<double>(n);
  out.satisfied = out.value >= model.min_capacity;
  return out;
}

}  // namespace crdra
