// SPDX-License-Identifier: Apache-2.0
#include "crdra/mac.hpp"

#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"
#include "crdra/p2p.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace crdra {

namespace {

void check_weights(const std::vector<double>& weights, std::size_t users) {
  if (weights.size() != users) throw DomainError("mac: one weight per user is required");
  for (std::size_t k = 0; k < users; ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) throw DomainError("mac: weights must be finite and nonnegative");
    if (k > 0 && weights[k] > weights[k - 1]) throw DomainError("mac: weights must be sorted nonincreasing");
  }
}

std::vector<double> telescoped(const std::vector<double>& weights) {
  std::vector<double> c(weights.size());
  for (std::size_t m = 0; m < weights.size(); ++m) {
    c[m] = weights[m] - (m + 1 < weights.size() ? weights[m + 1] : 0.0);
  }
  return c;
}

void check_shapes(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s, std::size_t dim) {
  if (channels.empty()) throw DomainError("mac: no users");
  if (s.users() != channels.size() || dim >= s.dims()) throw DomainError("mac: covariance set has wrong shape");
  for (std::size_t k = 0; k < channels.size(); ++k) {
    if (channels[k].rows() != channels[0].rows()) throw DomainError("mac: receive dimension differs across users");
    if (s(k, dim).rows() != channels[k].cols()) throw DomainError("mac: covariance size differs from N_k");
    require_psd(s(k, dim), "mac covariance");
  }
}

/// Cumulative I + sum_{i<=m} H_i X_i H_i^H for m = 0..K-1.
std::vector<Matrix> cumulative(const std::vector<ChannelMatrix>& h, const std::vector<Matrix>& x) {
  const Index m = h[0].rows();
  std::vector<Matrix> z(h.size());
  Matrix acc = Matrix::Identity(m, m);
  for (std::size_t k = 0; k < h.size(); ++k) {
    acc += h[k] * x[k] * h[k].adjoint();
    z[k] = acc;
  }
  return z;
}

/// sum_t c_t log2|base_t + H X H^H| - Tr X restricted to one user.
struct BlockTerms {
  std::vector<Matrix> base;
  std::vector<double> coef;
  Matrix h;

  double value(const Matrix& x) const {
    const Matrix hx = h * x * h.adjoint();
    double acc = -x.trace().real();
    for (std::size_t t = 0; t < base.size(); ++t) acc += coef[t] * log2det(hermitian_part(base[t] + hx));
    return acc;
  }

  Matrix gradient(const Matrix& x) const {
    const Matrix hx = h * x * h.adjoint();
    Matrix g = -Matrix::Identity(x.rows(), x.cols());
    for (std::size_t t = 0; t < base.size(); ++t) {
      Eigen::LLT<Matrix> llt(hermitian_part(base[t] + hx));
      g += (coef[t] / kLn2) * (h.adjoint() * llt.solve(h));
    }
    return hermitian_part(g);
  }
};

double inner_product(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

/// Projected-gradient ascent with Barzilai-Borwein trial steps and Armijo
/// backtracking. `project` maps an arbitrary point onto the feasible set.
/// Returns the gradient-map norm at the starting point.
template <typename Value, typename Gradient, typename Project>
double projected_ascent(std::vector<Matrix>& x, Value&& value, Gradient&& gradient, Project&& project, double tol,
                        std::size_t max_steps, double& step, std::size_t* steps_taken = nullptr) {
  auto dot = [](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += inner_product(a[i], b[i]);
    return acc;
  };
  auto axpy = [](const std::vector<Matrix>& a, double t, const std::vector<Matrix>& b) {
    std::vector<Matrix> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * b[i];
    return out;
  };
  auto diff = [](const std::vector<Matrix>& a, const std::vector<Matrix>& b) {
    std::vector<Matrix> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
  };

  double f = value(x);
  std::vector<Matrix> g = gradient(x);
  double first_map = -1.0;
  std::size_t taken = 0;
  for (; taken < max_steps; ++taken) {
    const auto map = diff(project(axpy(x, 1.0, g)), x);
    const double map_norm = std::sqrt(std::max(0.0, dot(map, map)));
    if (first_map < 0.0) first_map = map_norm;
    if (map_norm <= tol) break;

    double t = std::clamp(step, 1e-12, 1e12);
    std::vector<Matrix> xn;
    std::vector<Matrix> d;
    double fn = f;
    bool accepted = false;
    for (int back = 0; back < 60; ++back) {
      xn = project(axpy(x, t, g));
      d = diff(xn, x);
      fn = value(xn);
      const double dd = dot(d, d);
      if (fn >= f + dot(g, d) - dd / (2.0 * t) - 1e-14 * std::max(1.0, std::abs(f))) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    std::vector<Matrix> gn = gradient(xn);
    const auto y = diff(gn, g);
    const double sy = dot(d, y);
    const double ss = dot(d, d);
    step = sy < 0.0 && ss > 0.0 ? ss / -sy : 2.0 * t;
    x = std::move(xn);
    g = std::move(gn);
    f = fn;
  }
  if (steps_taken) *steps_taken = taken;
  return std::max(first_map, 0.0);
}

struct Whitening {
  Matrix inv_sqrt;
  Matrix sqrt;
  bool regularized = false;
};

Whitening whiten(const Matrix& b) {
  auto eig = hermitian_eig(b);
  const double top = std::max(1.0, eig.values.size() > 0 ? eig.values.maxCoeff() : 0.0);
  if (eig.values.size() > 0 && eig.values.minCoeff() < -1e-9 * top) throw DomainError("mac: penalty matrix is not PSD");
  Whitening w;
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 1e-12 * top) {
    eig.values.array() = eig.values.array().max(0.0) + 1e-12;
    w.regularized = true;
  }
  const RealVector root = eig.values.cwiseSqrt();
  w.sqrt = eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  w.inv_sqrt = eig.vectors * root.cwiseInverse().cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return w;
}

}  // namespace

double weighted_sum_rate_mac(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s,
                             const std::vector<double>& weights, std::size_t dim) {
  check_shapes(channels, s, dim);
  check_weights(weights, channels.size());
  const auto c = telescoped(weights);
  std::vector<Matrix> x(channels.size());
  for (std::size_t k = 0; k < channels.size(); ++k) x[k] = s(k, dim);
  const auto z = cumulative(channels, x);
  double acc = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) {
    if (c[m] != 0.0) acc += c[m] * log2det(z[m]);
  }
  return acc;
}

RealVector mac_user_rates(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s, std::size_t dim) {
  check_shapes(channels, s, dim);
  std::vector<Matrix> x(channels.size());
  for (std::size_t k = 0; k < channels.size(); ++k) x[k] = s(k, dim);
  const auto z = cumulative(channels, x);
  RealVector rates(static_cast<Index>(channels.size()));
  double previous = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) {
    const double current = log2det(z[k]);
    rates(static_cast<Index>(k)) = current - previous;
    previous = current;
  }
  return rates;
}

double weighted_sum_rate_mac_successive(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s,
                                        const std::vector<double>& weights, std::size_t dim) {
  check_weights(weights, channels.size());
  const RealVector rates = mac_user_rates(channels, s, dim);
  double acc = 0.0;
  for (Index k = 0; k < rates.size(); ++k) acc += weights[static_cast<std::size_t>(k)] * rates(k);
  return acc;
}

InnerResult maximize_mac_lagrangian(const std::vector<ChannelMatrix>& channels, const std::vector<double>& weights,
                                    const std::vector<Matrix>& penalties, const CovarianceSet* warm,
                                    const InnerOptions& options) {
  const std::size_t k_count = channels.size();
  if (k_count == 0) throw DomainError("mac: no users");
  check_weights(weights, k_count);
  if (penalties.size() != k_count) throw DomainError("mac: one penalty matrix per user is required");
  const auto c = telescoped(weights);
  const Index m = channels[0].rows();

  InnerResult out;
  std::vector<Whitening> white(k_count);
  std::vector<Matrix> h(k_count);
  std::vector<Matrix> x(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const Index n = channels[k].cols();
    if (channels[k].rows() != m) throw DomainError("mac: receive dimension differs across users");
    if (penalties[k].rows() != n || penalties[k].cols() != n) throw DomainError("mac: penalty matrix has wrong size");
    white[k] = whiten(penalties[k]);
    out.regularized = out.regularized || white[k].regularized;
    h[k] = channels[k] * white[k].inv_sqrt;
    if (warm && warm->users() == k_count && (*warm)(k).rows() == n) {
      x[k] = psd_project(hermitian_part(white[k].sqrt * (*warm)(k) * white[k].sqrt));
    } else {
      x[k] = Matrix::Zero(n, n);
    }
  }

  std::vector<double> steps(k_count, 1.0);
  auto project = [](const std::vector<Matrix>& y) {
    return std::vector<Matrix>{psd_project(hermitian_part(y[0]))};
  };

  for (out.cycles = 0; out.cycles < options.max_cycles; ++out.cycles) {
    double progress = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      BlockTerms terms;
      terms.h = h[k];
      Matrix acc = Matrix::Identity(m, m);
      for (std::size_t i = 0; i < k; ++i) acc += h[i] * x[i] * h[i].adjoint();
      for (std::size_t t = k; t < k_count; ++t) {
        if (t > k) acc += h[t] * x[t] * h[t].adjoint();
        if (c[t] > 0.0) {
          terms.base.push_back(acc);
          terms.coef.push_back(c[t]);
        }
      }
      const Index n = x[k].rows();
      if (terms.base.empty()) {
        progress = std::max(progress, x[k].norm());
        x[k] = Matrix::Zero(n, n);
      } else if (terms.base.size() == 1) {
        const Matrix g = hermitian_inv_sqrt(terms.base[0]) * h[k];
        const Matrix t = Matrix::Identity(n, n) / terms.coef[0];
        Matrix next = water_fill_penalized(g, t).covariance;
        progress = std::max(progress, (next - x[k]).norm());
        x[k] = std::move(next);
      } else {
        std::vector<Matrix> block{x[k]};
        const double map = projected_ascent(
            block, [&](const std::vector<Matrix>& v) { return terms.value(v[0]); },
            [&](const std::vector<Matrix>& v) { return std::vector<Matrix>{terms.gradient(v[0])}; }, project,
            options.tolerance, options.max_block_steps, steps[k]);
        progress = std::max(progress, map);
        x[k] = std::move(block[0]);
      }
    }
    if (progress <= options.tolerance) {
      out.converged = true;
      ++out.cycles;
      break;
    }
  }

  const auto z = cumulative(h, x);
  double value = 0.0;
  for (std::size_t t = 0; t < k_count; ++t) {
    if (c[t] != 0.0) value += c[t] * log2det(z[t]);
    value -= x[t].trace().real();
  }
  out.value = value;
  out.covariances = CovarianceSet(k_count, 1);
  for (std::size_t k = 0; k < k_count; ++k) {
    out.covariances(k) = hermitian_part(white[k].inv_sqrt * x[k] * white[k].inv_sqrt);
  }
  return out;
}

InnerResult solve_mac_sum_power(const std::vector<ChannelMatrix>& channels, const std::vector<double>& weights,
                                double power, const CovarianceSet* warm, const InnerOptions& options) {
  const std::size_t k_count = channels.size();
  if (k_count == 0) throw DomainError("mac: no users");
  check_weights(weights, k_count);
  if (!(power >= 0.0) || !std::isfinite(power)) throw DomainError("mac: sum power must be finite and nonnegative");
  const auto c = telescoped(weights);
  const Index m = channels[0].rows();
  Index total_dims = 0;
  for (const auto& h : channels) {
    if (h.rows() != m) throw DomainError("mac: receive dimension differs across users");
    total_dims += h.cols();
  }

  InnerResult out;
  out.covariances = CovarianceSet(k_count, 1);
  if (power == 0.0) {
    for (std::size_t k = 0; k < k_count; ++k) out.covariances(k) = Matrix::Zero(channels[k].cols(), channels[k].cols());
    out.converged = true;
    return out;
  }

  auto project = [&](const std::vector<Matrix>& y) {
    std::vector<HermitianEig> eig(k_count);
    RealVector all(total_dims);
    Index at = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      eig[k] = hermitian_eig(y[k]);
      all.segment(at, eig[k].values.size()) = eig[k].values;
      at += eig[k].values.size();
    }
    const RealVector proj = project_capped_simplex(all, power);
    std::vector<Matrix> out_x(k_count);
    at = 0;
    for (std::size_t k = 0; k < k_count; ++k) {
      const Index n = eig[k].values.size();
      out_x[k] = eig[k].vectors * proj.segment(at, n).cast<Complex>().asDiagonal() * eig[k].vectors.adjoint();
      at += n;
    }
    return out_x;
  };
  auto value = [&](const std::vector<Matrix>& x) {
    const auto z = cumulative(channels, x);
    double acc = 0.0;
    for (std::size_t t = 0; t < k_count; ++t) {
      if (c[t] != 0.0) acc += c[t] * log2det(z[t]);
    }
    return acc;
  };
  auto gradient = [&](const std::vector<Matrix>& x) {
    const auto z = cumulative(channels, x);
    std::vector<Matrix> g(k_count);
    Matrix weighted_inverse = Matrix::Zero(m, m);
    for (std::size_t t = k_count; t-- > 0;) {
      if (c[t] != 0.0) {
        Eigen::LLT<Matrix> llt(z[t]);
        weighted_inverse += (c[t] / kLn2) * llt.solve(Matrix::Identity(m, m));
      }
      g[t] = hermitian_part(channels[t].adjoint() * weighted_inverse * channels[t]);
    }
    return g;
  };

  std::vector<Matrix> x(k_count);
  bool seeded = warm && warm->users() == k_count;
  if (seeded) {
    for (std::size_t k = 0; k < k_count; ++k) seeded = seeded && (*warm)(k).rows() == channels[k].cols();
  }
  if (seeded) {
    for (std::size_t k = 0; k < k_count; ++k) x[k] = hermitian_part((*warm)(k));
    x = project(x);
  } else {
    const double level = power / static_cast<double>(total_dims);
    for (std::size_t k = 0; k < k_count; ++k) {
      x[k] = Matrix::Identity(channels[k].cols(), channels[k].cols()) * level;
    }
  }

  double step = 1.0;
  std::size_t taken = 0;
  // Projected gradient steps are cheap; the outer cap is max_cycles * max_block_steps.
  const std::size_t budget = options.max_cycles * options.max_block_steps;
  projected_ascent(x, value, gradient, project, options.tolerance, budget, step, &taken);
  out.cycles = taken;
  out.converged = taken < budget;
  out.value = value(x);
  for (std::size_t k = 0; k < k_count; ++k) out.covariances(k) = x[k];
  return out;
}

MacProblem MacProblem::from_instance(const NetworkInstance& instance, std::vector<double> power,
                                     std::vector<double> interference) {
  if (instance.role != Role::MAC && instance.role != Role::P2P) throw DomainError("mac: instance role is not MAC");
  MacProblem p;
  p.channels = instance.direct;
  p.pu_channels = instance.pu;
  if (p.pu_channels.empty()) p.pu_channels.assign(instance.users(), {});
  p.weights = instance.weights.empty() ? std::vector<double>(instance.users(), 1.0) : instance.weights;
  p.power = std::move(power);
  p.interference = std::move(interference);
  return p;
}

void MacProblem::validate() const {
  const std::size_t k_count = channels.size();
  if (k_count == 0) throw DomainError("mac: no users");
  check_weights(weights, k_count);
  if (power.size() != k_count) throw DomainError("mac: one power budget per user is required");
  if (pu_channels.size() != k_count) throw DomainError("mac: PU channel table must have one row per user");
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& h = channels[k];
    if (h.rows() < 1 || h.cols() < 1 || h.rows() != channels[0].rows()) throw DomainError("mac: bad channel shape");
    if (!all_finite(h)) throw DomainError("mac: non-finite channel entry");
    if (!(power[k] > 0.0) || !std::isfinite(power[k])) throw DomainError("mac: power budgets must be positive and finite");
    if (pu_channels[k].size() != interference.size()) throw DomainError("mac: one interference budget per PU is required");
    for (const auto& g : pu_channels[k]) {
      if (g.cols() != h.cols()) throw DomainError("mac: PU channel column count differs from N_k");
      if (!all_finite(g)) throw DomainError("mac: non-finite PU channel entry");
    }
  }
  for (double gamma : interference) {
    if (!(gamma >= 0.0)) throw DomainError("mac: interference budgets must be nonnegative");
  }
}

SolveReport solve_mac_wsr(const MacProblem& problem, const DualOptions& options, const InnerOptions& inner) {
  problem.validate();
  const std::size_t k_count = problem.channels.size();
  const std::size_t j_total = problem.interference.size();

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < j_total; ++j) {
    if (problem.interference[j] > 0.0 && std::isfinite(problem.interference[j])) active.push_back(j);
  }

  // Zero interference budgets confine each user to the null space of its
  // channels to those PUs; an empty null space is represented by a zero column.
  std::vector<Matrix> basis(k_count);
  std::vector<ChannelMatrix> h(k_count);
  std::vector<std::vector<Matrix>> gram(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const Index n = problem.channels[k].cols();
    Index rows = 0;
    for (std::size_t j = 0; j < j_total; ++j) {
      if (problem.interference[j] == 0.0) rows += problem.pu_channels[k][j].rows();
    }
    Matrix stacked(rows, n);
    Index at = 0;
    for (std::size_t j = 0; j < j_total; ++j) {
      if (problem.interference[j] != 0.0) continue;
      stacked.middleRows(at, problem.pu_channels[k][j].rows()) = problem.pu_channels[k][j];
      at += problem.pu_channels[k][j].rows();
    }
    basis[k] = rows == 0 ? Matrix(Matrix::Identity(n, n)) : null_space(stacked);
    if (basis[k].cols() == 0) basis[k] = Matrix::Zero(n, 1);
    h[k] = problem.channels[k] * basis[k];
    for (auto j : active) {
      const Matrix g = problem.pu_channels[k][j] * basis[k];
      gram[k].push_back(g.adjoint() * g);
    }
  }

  DualProblem dp;
  const Index n_dual = static_cast<Index>(k_count + active.size());
  dp.budgets.resize(n_dual);
  for (std::size_t k = 0; k < k_count; ++k) {
    dp.labels.push_back("ptpc_" + std::to_string(k + 1));
    dp.budgets(static_cast<Index>(k)) = problem.power[k];
  }
  for (std::size_t a = 0; a < active.size(); ++a) {
    dp.labels.push_back("pipc_" + std::to_string(active[a] + 1));
    dp.budgets(static_cast<Index>(k_count + a)) = problem.interference[active[a]];
  }

  dp.objective = [&](const CovarianceSet& s) { return weighted_sum_rate_mac(h, s, problem.weights); };
  dp.usage = [&](const CovarianceSet& s) {
    RealVector u = RealVector::Zero(n_dual);
    for (std::size_t k = 0; k < k_count; ++k) {
      u(static_cast<Index>(k)) = s(k).trace().real();
      for (std::size_t a = 0; a < active.size(); ++a) {
        u(static_cast<Index>(k_count + a)) += (gram[k][a] * s(k)).trace().real();
      }
    }
    return u;
  };
  std::optional<CovarianceSet> last;
  dp.evaluate = [&](const RealVector& eta) {
    std::vector<Matrix> penalties(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
      const Index n = h[k].cols();
      penalties[k] = Matrix::Identity(n, n) * eta(static_cast<Index>(k));
      for (std::size_t a = 0; a < active.size(); ++a) penalties[k] += eta(static_cast<Index>(k_count + a)) * gram[k][a];
    }
    auto result = maximize_mac_lagrangian(h, problem.weights, penalties, last ? &*last : nullptr, inner);
    last = result.covariances;
    DualEvaluation e;
    e.point = std::move(result.covariances);
    e.regularized = result.regularized;
    e.value = dp.objective(e.point) - eta.dot(dp.usage(e.point) - dp.budgets);
    return e;
  };

  double level = kInf;
  for (std::size_t k = 0; k < k_count; ++k) level = std::min(level, problem.power[k] / static_cast<double>(h[k].cols()));
  for (std::size_t a = 0; a < active.size(); ++a) {
    double total = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) total += gram[k][a].trace().real();
    if (total > 0.0) level = std::min(level, problem.interference[active[a]] / total);
  }
  CovarianceSet slater(k_count, 1);
  for (std::size_t k = 0; k < k_count; ++k) slater(k) = Matrix::Identity(h[k].cols(), h[k].cols()) * (0.5 * level);
  dp.slater_point = std::move(slater);

  DualOptions opts = options;
  opts.recovery = PrimalRecovery::ScaleAndBlend;
  SolveReport report = solve_dual(dp, opts);

  for (std::size_t k = 0; k < k_count; ++k) {
    report.covariances(k) = hermitian_part(basis[k] * report.covariances(k) * basis[k].adjoint());
  }
  std::vector<ConstraintReport> constraints(report.constraints.begin(), report.constraints.begin() + k_count);
  for (std::size_t j = 0; j < j_total; ++j) {
    ConstraintReport c{"pipc_" + std::to_string(j + 1), problem.interference[j], 0.0, 0.0};
    for (std::size_t k = 0; k < k_count; ++k) c.usage += interference_power(problem.pu_channels[k][j], report.covariances(k));
    const auto it = std::find(active.begin(), active.end(), j);
    if (it != active.end()) c.multiplier = report.multipliers(static_cast<Index>(k_count + (it - active.begin())));
    constraints.push_back(std::move(c));
  }
  report.constraints = std::move(constraints);
  return report;
}

}  // namespace crdra
