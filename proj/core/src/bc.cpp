// SPDX-License-Identifier: Apache-2.0
#include "crdra/bc.hpp"

#include "crdra/ellipsoid.hpp"
#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace crdra {

BcProblem BcProblem::from_instance(const NetworkInstance& instance, double power, std::vector<double> interference) {
  if (instance.role != Role::BC) throw DomainError("bc: instance role is not BC");
  BcProblem p;
  p.channels = instance.direct;
  if (!instance.pu.empty()) p.pu_channels = instance.pu[0];
  p.weights = instance.weights.empty() ? std::vector<double>(instance.users(), 1.0) : instance.weights;
  p.power = power;
  p.interference = std::move(interference);
  return p;
}

void BcProblem::validate() const {
  if (channels.empty()) throw DomainError("bc: no users");
  const Index m = channels[0].rows();
  for (const auto& h : channels) {
    if (h.rows() != m || h.cols() < 1 || m < 1) throw DomainError("bc: bad channel shape");
    if (!all_finite(h)) throw DomainError("bc: non-finite channel entry");
  }
  if (weights.size() != channels.size()) throw DomainError("bc: one weight per user is required");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (!(weights[k] >= 0.0) || !std::isfinite(weights[k])) throw DomainError("bc: weights must be finite and nonnegative");
    if (k > 0 && weights[k] > weights[k - 1]) throw DomainError("bc: weights must be sorted nonincreasing");
  }
  if (!(power > 0.0) || !std::isfinite(power)) throw DomainError("bc: power budget must be positive and finite");
  if (interference.size() != pu_channels.size()) throw DomainError("bc: one interference budget per PU is required");
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    if (pu_channels[j].cols() != m) throw DomainError("bc: PU channel column count differs from M");
    if (!all_finite(pu_channels[j])) throw DomainError("bc: non-finite PU channel entry");
    if (!(interference[j] >= 0.0)) throw DomainError("bc: interference budgets must be nonnegative");
  }
}

GltccCombination GltccCombination::make(const std::vector<ChannelMatrix>& pu_channels, double power,
                                        const std::vector<double>& interference, const RealVector& lambda,
                                        Index m) {
  if (lambda.size() != static_cast<Index>(pu_channels.size()) + 1) throw DomainError("gltcc: multiplier count mismatch");
  if ((lambda.array() < 0.0).any()) throw DomainError("gltcc: multipliers must be nonnegative");
  GltccCombination c;
  c.lambda = lambda;
  c.a = Matrix::Identity(m, m) * lambda(0);
  c.budget = lambda(0) * power;
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    const double l = lambda(static_cast<Index>(j) + 1);
    c.a += l * pu_channels[j].adjoint() * pu_channels[j];
    c.budget += l * interference[j];
  }
  c.a = hermitian_part(c.a);
  const auto eig = hermitian_eig(c.a);
  const double top = std::max(1.0, eig.values.maxCoeff());
  if (eig.values.minCoeff() <= 1e-10 * top) {
    c.a.diagonal().array() += 1e-10;
    c.regularized = true;
  }
  return c;
}

RealVector bc_user_rates(const std::vector<ChannelMatrix>& channels, const CovarianceSet& q) {
  const std::size_t k_count = channels.size();
  if (q.users() != k_count || k_count == 0) throw DomainError("bc: covariance set has wrong shape");
  const Index m = channels[0].rows();
  RealVector rates(static_cast<Index>(k_count));
  Matrix after = Matrix::Zero(m, m);
  for (std::size_t k = k_count; k-- > 0;) {
    if (q(k).rows() != m) throw DomainError("bc: covariance size differs from M");
    require_psd(q(k), "bc covariance");
    const auto& h = channels[k];
    const double without = log2det_identity_plus(h.adjoint() * after * h);
    after += q(k);
    const double with = log2det_identity_plus(h.adjoint() * after * h);
    rates(static_cast<Index>(k)) = with - without;
  }
  return rates;
}

double weighted_sum_rate_bc(const std::vector<ChannelMatrix>& channels, const CovarianceSet& q,
                            const std::vector<double>& weights) {
  if (weights.size() != channels.size()) throw DomainError("bc: one weight per user is required");
  const RealVector rates = bc_user_rates(channels, q);
  double acc = 0.0;
  for (Index k = 0; k < rates.size(); ++k) acc += weights[static_cast<std::size_t>(k)] * rates(k);
  return acc;
}

CovarianceSet mac_to_bc(const std::vector<ChannelMatrix>& channels, const CovarianceSet& mac) {
  const std::size_t k_count = channels.size();
  if (mac.users() != k_count || k_count == 0) throw DomainError("mac_to_bc: covariance set has wrong shape");
  const Index m = channels[0].rows();
  CovarianceSet out(k_count, 1);

  std::vector<Matrix> before(k_count);  // I + sum_{i<k} H_i S_i H_i^H
  Matrix acc = Matrix::Identity(m, m);
  for (std::size_t k = 0; k < k_count; ++k) {
    before[k] = acc;
    acc += channels[k] * mac(k) * channels[k].adjoint();
  }

  Matrix after = Matrix::Zero(m, m);  // sum_{i>k} Q_i
  for (std::size_t k = k_count; k-- > 0;) {
    const auto& h = channels[k];
    const Index n = h.cols();
    const Matrix a = Matrix::Identity(n, n) + h.adjoint() * after * h;
    const Matrix b_inv_sqrt = hermitian_inv_sqrt(before[k]);
    const Matrix a_sqrt = hermitian_sqrt(a);
    const Matrix a_inv_sqrt = hermitian_inv_sqrt(a);
    Eigen::JacobiSVD<Matrix> svd(b_inv_sqrt * h * a_inv_sqrt, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix rotation = svd.matrixU() * svd.matrixV().adjoint();  // M x N_k
    const Matrix left = b_inv_sqrt * rotation * a_sqrt;
    out(k) = hermitian_part(left * mac(k) * left.adjoint());
    after += out(k);
  }
  return out;
}

namespace {

/// Broadcast problem restricted to the null space of zero-budget PUs, with
/// only the finite positive interference budgets kept.
struct ReducedBc {
  Matrix basis;  // M x r
  std::vector<ChannelMatrix> channels;
  std::vector<ChannelMatrix> pu;
  std::vector<double> budgets;
  std::vector<std::size_t> pu_index;
};

ReducedBc reduce(const std::vector<ChannelMatrix>& channels, const std::vector<ChannelMatrix>& pu_channels,
                 const std::vector<double>& interference, Index m) {
  ReducedBc r;
  Index rows = 0;
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    if (interference[j] == 0.0) rows += pu_channels[j].rows();
  }
  Matrix stacked(rows, m);
  Index at = 0;
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    if (interference[j] != 0.0) continue;
    stacked.middleRows(at, pu_channels[j].rows()) = pu_channels[j];
    at += pu_channels[j].rows();
  }
  r.basis = rows == 0 ? Matrix(Matrix::Identity(m, m)) : null_space(stacked);
  for (const auto& h : channels) r.channels.push_back(r.basis.adjoint() * h);
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    if (interference[j] > 0.0 && std::isfinite(interference[j])) {
      r.pu.push_back(pu_channels[j] * r.basis);
      r.budgets.push_back(interference[j]);
      r.pu_index.push_back(j);
    }
  }
  return r;
}

std::string format_rates(const RealVector& v) {
  std::ostringstream os;
  os.precision(10);
  os << "[";
  for (Index i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
  os << "]";
  return os.str();
}

DualMacBound bound_reduced(const ReducedBc& red, double power, const std::vector<double>& weights,
                           const RealVector& lambda, const CovarianceSet* warm, const InnerOptions& inner) {
  const std::size_t k_count = red.channels.size();
  const Index m = red.basis.cols();
  const auto comb = GltccCombination::make(red.pu, power, red.budgets, lambda, m);
  DualMacBound out;
  out.regularized = comb.regularized;
  if (!(comb.budget > 0.0)) {
    std::vector<Index> mac_sizes;
    for (const auto& h : red.channels) mac_sizes.push_back(h.cols());
    out.mac_covariances = CovarianceSet::zeros(mac_sizes);
    out.bc_covariances = CovarianceSet::zeros(std::vector<Index>(k_count, m));
    out.mac_rates = RealVector::Zero(static_cast<Index>(k_count));
    out.bc_rates = out.mac_rates;
    out.converged = true;
    return out;
  }
  const Matrix a_inv_sqrt = hermitian_inv_sqrt(comb.a);
  std::vector<ChannelMatrix> whitened(k_count);
  for (std::size_t k = 0; k < k_count; ++k) whitened[k] = a_inv_sqrt * red.channels[k];

  auto result = solve_mac_sum_power(whitened, weights, comb.budget, warm, inner);
  out.value = result.value;
  out.converged = result.converged;
  out.mac_rates = mac_user_rates(whitened, result.covariances);
  const CovarianceSet q_white = mac_to_bc(whitened, result.covariances);
  out.bc_covariances = CovarianceSet(k_count, 1);
  for (std::size_t k = 0; k < k_count; ++k) out.bc_covariances(k) = hermitian_part(a_inv_sqrt * q_white(k) * a_inv_sqrt);
  out.bc_rates = bc_user_rates(red.channels, out.bc_covariances);
  out.mac_covariances = std::move(result.covariances);
  if ((out.bc_rates - out.mac_rates).cwiseAbs().maxCoeff() > 1e-3) {
    throw NumericalError("bc: MAC-to-BC transformation changed the rates; dual MAC " + format_rates(out.mac_rates) +
                         ", broadcast " + format_rates(out.bc_rates));
  }
  return out;
}

}  // namespace

DualMacBound dual_mac_bound(const BcProblem& problem, const RealVector& lambda, const CovarianceSet* warm,
                            const InnerOptions& inner) {
  problem.validate();
  const Index m = problem.channels[0].rows();
  const ReducedBc red = reduce(problem.channels, problem.pu_channels, problem.interference, m);
  if (red.basis.cols() == 0) throw InfeasibleError("bc: zero interference budgets leave no transmit dimension");
  auto out = bound_reduced(red, problem.power, problem.weights, lambda, warm, inner);
  for (std::size_t k = 0; k < out.bc_covariances.users(); ++k) {
    out.bc_covariances(k) = hermitian_part(red.basis * out.bc_covariances(k) * red.basis.adjoint());
  }
  return out;
}

SolveReport solve_bc_wsr(const BcProblem& problem, const DualOptions& options, const InnerOptions& inner) {
  problem.validate();
  const std::size_t k_count = problem.channels.size();
  const Index m = problem.channels[0].rows();
  const ReducedBc red = reduce(problem.channels, problem.pu_channels, problem.interference, m);
  const Index r = red.basis.cols();

  auto restate = [&](SolveReport& report) {
    for (std::size_t k = 0; k < k_count; ++k) {
      report.covariances(k) = hermitian_part(red.basis * report.covariances(k) * red.basis.adjoint());
    }
    Matrix total = Matrix::Zero(m, m);
    for (std::size_t k = 0; k < k_count; ++k) total += report.covariances(k);
    std::vector<ConstraintReport> out;
    out.push_back({"ptpc", problem.power, total.trace().real(), report.multipliers.size() ? report.multipliers(0) : 0.0});
    for (std::size_t j = 0; j < problem.pu_channels.size(); ++j) {
      ConstraintReport c{"pipc_" + std::to_string(j + 1), problem.interference[j],
                         interference_power(problem.pu_channels[j], total), 0.0};
      const auto it = std::find(red.pu_index.begin(), red.pu_index.end(), j);
      if (it != red.pu_index.end() && report.multipliers.size() > 0) {
        c.multiplier = report.multipliers(1 + (it - red.pu_index.begin()));
      }
      out.push_back(std::move(c));
    }
    report.constraints = std::move(out);
  };

  if (r == 0) {
    SolveReport report;
    report.covariances = CovarianceSet::zeros(std::vector<Index>(k_count, 0));
    report.converged = true;
    report.multipliers = RealVector::Zero(1 + static_cast<Index>(red.pu.size()));
    report.zero_only = true;
    report.warnings.push_back("zero-forcing null space is trivial; only Q = 0 is feasible");
    restate(report);
    return report;
  }

  const std::size_t j_count = red.pu.size();
  const Index n = 1 + static_cast<Index>(j_count);
  std::vector<Matrix> gram(j_count);
  for (std::size_t j = 0; j < j_count; ++j) gram[j] = red.pu[j].adjoint() * red.pu[j];

  DualProblem dp;
  dp.labels.push_back("ptpc");
  dp.budgets.resize(n);
  dp.budgets(0) = problem.power;
  for (std::size_t j = 0; j < j_count; ++j) {
    dp.labels.push_back("pipc_" + std::to_string(red.pu_index[j] + 1));
    dp.budgets(1 + static_cast<Index>(j)) = red.budgets[j];
  }
  dp.objective = [&](const CovarianceSet& q) { return weighted_sum_rate_bc(red.channels, q, problem.weights); };
  dp.usage = [&](const CovarianceSet& q) {
    Matrix total = Matrix::Zero(r, r);
    for (std::size_t k = 0; k < k_count; ++k) total += q(k);
    RealVector u(n);
    u(0) = total.trace().real();
    for (std::size_t j = 0; j < j_count; ++j) u(1 + static_cast<Index>(j)) = (gram[j] * total).trace().real();
    return u;
  };
  std::optional<CovarianceSet> last;
  dp.evaluate = [&](const RealVector& lambda) {
    auto bound = bound_reduced(red, problem.power, problem.weights, lambda, last ? &*last : nullptr, inner);
    last = bound.mac_covariances;
    DualEvaluation e;
    e.point = std::move(bound.bc_covariances);
    e.value = bound.value;
    e.regularized = bound.regularized;
    return e;
  };

  // F is invariant to positive scaling of lambda; keep sum(lambda) >= 1 and
  // use neutral cuts, which stay valid for this quasi-convex function.
  DualOptions opts = options;
  opts.recovery = PrimalRecovery::Scale;
  opts.deep_cuts = false;
  HalfSpace normalization;
  normalization.normal = -RealVector::Ones(n);
  normalization.offset = -1.0;
  opts.extra_domain.push_back(std::move(normalization));
  if (!(opts.initial_radius > 0.0)) opts.initial_radius = 2.0 * std::sqrt(static_cast<double>(n)) + 1.0;

  SolveReport report = solve_dual(dp, opts);
  restate(report);
  return report;
}

MisoBcProblem MisoBcProblem::from_instance(const NetworkInstance& instance, double power,
                                           std::vector<double> interference) {
  if (instance.role != Role::BC) throw DomainError("miso bc: instance role is not BC");
  MisoBcProblem p;
  for (const auto& h : instance.direct) {
    if (h.cols() != 1) throw DomainError("miso bc: every user must have a single receive antenna");
    p.channels.push_back(h.col(0));
  }
  if (!instance.pu.empty()) p.pu_channels = instance.pu[0];
  p.power = power;
  p.interference = std::move(interference);
  return p;
}

void MisoBcProblem::validate() const {
  if (channels.empty()) throw DomainError("miso bc: no users");
  const Index m = channels[0].size();
  for (const auto& h : channels) {
    if (h.size() != m || m < 1) throw DomainError("miso bc: channel length differs across users");
    if (!h.allFinite()) throw DomainError("miso bc: non-finite channel entry");
  }
  if (!(power > 0.0) || !std::isfinite(power)) throw DomainError("miso bc: power budget must be positive and finite");
  if (interference.size() != pu_channels.size()) throw DomainError("miso bc: one interference budget per PU is required");
  for (std::size_t j = 0; j < pu_channels.size(); ++j) {
    if (pu_channels[j].cols() != m) throw DomainError("miso bc: PU channel column count differs from M");
    if (!all_finite(pu_channels[j])) throw DomainError("miso bc: non-finite PU channel entry");
    if (!(interference[j] >= 0.0)) throw DomainError("miso bc: interference budgets must be nonnegative");
  }
}

std::string to_string(Feasibility f) {
  switch (f) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::Infeasible: return "infeasible";
    case Feasibility::Indeterminate: return "indeterminate";
  }
  return "unknown";
}

RealVector downlink_sinr(const std::vector<Vector>& channels, const std::vector<Vector>& beamformers) {
  const std::size_t k_count = channels.size();
  if (beamformers.size() != k_count) throw DomainError("downlink_sinr: one beamformer per user is required");
  RealVector sinr(static_cast<Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    double interference = 1.0;
    for (std::size_t i = 0; i < k_count; ++i) {
      if (i != k) interference += std::norm(channels[k].dot(beamformers[i]));
    }
    sinr(static_cast<Index>(k)) = std::norm(channels[k].dot(beamformers[k])) / interference;
  }
  return sinr;
}

namespace {

struct BalanceEval {
  enum class Kind { Ok, Unbounded, Stalled } kind = Kind::Ok;
  RealVector usage;
  double weighted = 0.0;  // lambda^T usage = minimum combined cost
  std::vector<Vector> beamformers;  // reduced coordinates
  std::size_t iterations = 0;
};

/// Minimum-cost beamformers for target alpha under transmit cost matrix A,
/// through the uplink fixed point and the downlink power system.
BalanceEval balance_at(const std::vector<Vector>& h, const std::vector<ChannelMatrix>& pu, const Matrix& a,
                       const RealVector& lambda, double alpha, std::size_t max_iterations) {
  const std::size_t k_count = h.size();
  const Index m = a.rows();
  BalanceEval out;
  RealVector q = RealVector::Zero(static_cast<Index>(k_count));
  RealVector first;
  std::vector<Matrix> sigma(k_count);
  bool converged = false;
  for (std::size_t it = 0; it < max_iterations; ++it) {
    Matrix total = a;
    for (std::size_t i = 0; i < k_count; ++i) total += q(static_cast<Index>(i)) * h[i] * h[i].adjoint();
    RealVector next(static_cast<Index>(k_count));
    for (std::size_t k = 0; k < k_count; ++k) {
      sigma[k] = total - q(static_cast<Index>(k)) * h[k] * h[k].adjoint();
      Eigen::LDLT<Matrix> ldlt(sigma[k]);
      const double s = h[k].dot(ldlt.solve(h[k])).real();
      if (!(s > 0.0)) {
        out.kind = BalanceEval::Kind::Unbounded;
        return out;
      }
      next(static_cast<Index>(k)) = alpha / s;
    }
    if (it == 0) first = next;
    out.iterations = it + 1;
    if (next.sum() > 1e10 * first.sum()) {
      out.kind = BalanceEval::Kind::Unbounded;
      return out;
    }
    const double change = (next - q).cwiseAbs().maxCoeff();
    q = next;
    if (change <= 1e-13 * q.maxCoeff()) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    out.kind = BalanceEval::Kind::Stalled;
    return out;
  }

  std::vector<Vector> w(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    Matrix total = a;
    for (std::size_t i = 0; i < k_count; ++i) {
      if (i != k) total += q(static_cast<Index>(i)) * h[i] * h[i].adjoint();
    }
    w[k] = Eigen::LDLT<Matrix>(total).solve(h[k]);
    w[k] /= w[k].norm();
  }
  RealMatrix system(static_cast<Index>(k_count), static_cast<Index>(k_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t i = 0; i < k_count; ++i) {
      const double g = std::norm(h[k].dot(w[i]));
      system(static_cast<Index>(k), static_cast<Index>(i)) = i == k ? g : -alpha * g;
    }
  }
  const RealVector p = system.partialPivLu().solve(RealVector::Constant(static_cast<Index>(k_count), alpha));
  if (!p.allFinite() || p.minCoeff() < -1e-9 * std::max(1.0, p.cwiseAbs().maxCoeff())) {
    out.kind = BalanceEval::Kind::Stalled;
    return out;
  }
  out.usage = RealVector::Zero(1 + static_cast<Index>(pu.size()));
  out.beamformers.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double power = std::max(0.0, p(static_cast<Index>(k)));
    out.beamformers[k] = std::sqrt(power) * w[k];
    out.usage(0) += power;
    for (std::size_t j = 0; j < pu.size(); ++j) out.usage(1 + static_cast<Index>(j)) += power * (pu[j] * w[k]).squaredNorm();
  }
  out.weighted = lambda.dot(out.usage);
  (void)m;
  return out;
}

}  // namespace

BalanceCheck check_balance_feasible(const MisoBcProblem& problem, double alpha, const BalanceOptions& options) {
  problem.validate();
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw DomainError("check_balance_feasible: alpha must be finite and >= 0");
  const std::size_t k_count = problem.channels.size();
  const Index m = problem.channels[0].size();
  BalanceCheck out;
  out.usage = RealVector::Zero(1 + static_cast<Index>(problem.pu_channels.size()));

  if (alpha == 0.0) {
    out.status = Feasibility::Feasible;
    out.beamformers.assign(k_count, Vector::Zero(m));
    out.sinr = RealVector::Zero(static_cast<Index>(k_count));
    return out;
  }

  std::vector<ChannelMatrix> as_matrices;
  for (const auto& h : problem.channels) as_matrices.push_back(h);
  const ReducedBc red = reduce(as_matrices, problem.pu_channels, problem.interference, m);
  const Index r = red.basis.cols();
  if (r == 0) {
    out.status = Feasibility::Infeasible;
    out.note = "zero interference budgets leave no transmit dimension";
    return out;
  }
  std::vector<Vector> h(k_count);
  for (std::size_t k = 0; k < k_count; ++k) h[k] = red.channels[k].col(0);

  const std::size_t j_count = red.pu.size();
  RealVector budgets(1 + static_cast<Index>(j_count));
  budgets(0) = problem.power;
  for (std::size_t j = 0; j < j_count; ++j) budgets(1 + static_cast<Index>(j)) = red.budgets[j];

  auto finish_feasible = [&](const BalanceEval& e) {
    out.status = Feasibility::Feasible;
    out.beamformers.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) out.beamformers[k] = red.basis * e.beamformers[k];
    out.sinr = downlink_sinr(problem.channels, out.beamformers);
    for (std::size_t j = 0; j < problem.pu_channels.size(); ++j) {
      double acc = 0.0;
      for (const auto& v : out.beamformers) acc += (problem.pu_channels[j] * v).squaredNorm();
      out.usage(1 + static_cast<Index>(j)) = acc;
    }
    out.usage(0) = 0.0;
    for (const auto& v : out.beamformers) out.usage(0) += v.squaredNorm();
  };

  // Multipliers normalized so that lambda^T budgets = 1; x holds the PU part.
  auto lambda_of = [&](const RealVector& x) {
    RealVector lambda(1 + static_cast<Index>(j_count));
    lambda(0) = std::max(0.0, 1.0 - x.dot(budgets.tail(static_cast<Index>(j_count)))) / problem.power;
    lambda.tail(static_cast<Index>(j_count)) = x;
    return lambda;
  };
  auto evaluate = [&](const RealVector& x, BalanceEval& e) -> bool {
    const RealVector lambda = lambda_of(x);
    const auto comb = GltccCombination::make(red.pu, problem.power, red.budgets, lambda, r);
    e = balance_at(h, red.pu, comb.a, lambda, alpha, options.max_fixed_point_iterations);
    out.iterations += 1;
    if (e.kind == BalanceEval::Kind::Unbounded) {
      out.status = Feasibility::Infeasible;
      out.note = "uplink power iteration diverges: target unreachable at any power";
      return true;
    }
    if (e.kind == BalanceEval::Kind::Stalled) {
      out.status = Feasibility::Indeterminate;
      out.note = "uplink power iteration did not converge";
      return true;
    }
    if (e.weighted > 1.0 + 1e-9) {
      out.status = Feasibility::Infeasible;
      out.note = "combined budget exceeded by the minimum-cost beamformers";
      return true;
    }
    if ((e.usage.array() <= budgets.array() * (1.0 + 1e-9)).all()) {
      finish_feasible(e);
      return true;
    }
    return false;
  };

  BalanceEval e;
  if (j_count == 0) {
    if (!evaluate(RealVector(), e)) {
      out.status = Feasibility::Infeasible;
      out.note = "power budget exceeded";
    }
    return out;
  }

  const RealVector pu_budgets = budgets.tail(static_cast<Index>(j_count));
  RealVector center = pu_budgets.cwiseInverse() / static_cast<double>(j_count + 1);
  Ellipsoid ellipsoid(center, 1.01 * pu_budgets.cwiseInverse().norm());
  double best = -kInf;
  std::size_t evaluations = 0;
  std::size_t cuts = 0;
  while (evaluations < options.max_ellipsoid_iterations && cuts < 20 * options.max_ellipsoid_iterations) {
    ++cuts;
    const RealVector& x = ellipsoid.center();
    RealVector normal;
    double depth = 0.0;
    const double simplex = x.dot(pu_budgets) - 1.0;
    Index negative;
    const double low = x.minCoeff(&negative);
    if (low < 0.0) {
      normal = -RealVector::Unit(x.size(), negative);
      depth = -low;
    } else if (simplex > 0.0) {
      normal = pu_budgets;
      depth = simplex;
    }
    if (normal.size() > 0) {
      if (!ellipsoid.cut(normal, depth)) break;
      continue;
    }
    ++evaluations;
    if (evaluate(x, e)) return out;
    best = std::max(best, e.weighted);
    RealVector ascent = e.usage.tail(static_cast<Index>(j_count)) - pu_budgets * (e.usage(0) / problem.power);
    if (!ellipsoid.cut(-ascent, best - e.weighted)) break;
    if (ellipsoid.shape().diagonal().maxCoeff() <= 1e-24 * center.squaredNorm()) break;
  }
  out.status = Feasibility::Indeterminate;
  out.note = "multiplier search ended without a certificate";
  return out;
}

BalanceResult solve_sinr_balancing(const MisoBcProblem& problem, double tolerance, const BalanceOptions& options) {
  problem.validate();
  if (!(tolerance > 0.0)) throw DomainError("solve_sinr_balancing: tolerance must be positive");
  const std::size_t k_count = problem.channels.size();
  const Index m = problem.channels[0].size();

  double hi = 0.0;
  for (const auto& h : problem.channels) hi = std::max(hi, problem.power * h.squaredNorm());

  BalanceResult result;
  BalanceCheck best = check_balance_feasible(problem, 0.0, options);
  double lo = 0.0;
  if (hi > 0.0) {
    while (hi - lo > tolerance) {
      const double mid = 0.5 * (lo + hi);
      BalanceCheck c = check_balance_feasible(problem, mid, options);
      ++result.bisection_steps;
      if (c.status == Feasibility::Feasible) {
        lo = mid;
        best = std::move(c);
      } else {
        if (c.status == Feasibility::Indeterminate) {
          result.warnings.push_back("indeterminate feasibility at alpha = " + std::to_string(mid) + " treated as infeasible: " + c.note);
        }
        hi = mid;
      }
    }
  }
  result.alpha_star = lo;
  result.beamformers = best.beamformers;
  if (result.beamformers.empty()) result.beamformers.assign(k_count, Vector::Zero(m));
  result.sinr = downlink_sinr(problem.channels, result.beamformers);
  for (const auto& v : result.beamformers) result.power_usage += v.squaredNorm();
  for (const auto& f : problem.pu_channels) {
    double acc = 0.0;
    for (const auto& v : result.beamformers) acc += (f * v).squaredNorm();
    result.interference_usage.push_back(acc);
  }
  return result;
}

}  // namespace crdra
