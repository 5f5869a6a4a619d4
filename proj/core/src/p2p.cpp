// SPDX-License-Identifier: Apache-2.0
#include "crdra/p2p.hpp"

#include "crdra/errors.hpp"
#include "crdra/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crdra {

WaterFillResult water_fill_penalized(const ChannelMatrix& h, const Matrix& t) {
  const Index n = h.cols();
  if (t.rows() != n || t.cols() != n) throw DomainError("water_fill_penalized: penalty matrix has wrong size");
  if (!is_hermitian(t, 1e-8)) throw DomainError("water_fill_penalized: penalty matrix is not Hermitian");

  auto eig = hermitian_eig(t);
  const double top = std::max(1.0, eig.values.maxCoeff());
  if (eig.values.minCoeff() < -1e-9 * top) throw DomainError("water_fill_penalized: penalty matrix is not PSD");
  WaterFillResult out;
  if (eig.values.minCoeff() <= 1e-12 * top) {
    eig.values.array() = eig.values.array().max(0.0) + 1e-12;
    out.regularized = true;
  }
  const RealVector inv_root = eig.values.cwiseSqrt().cwiseInverse();
  const Matrix t_inv_sqrt = eig.vectors * inv_root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();

  const Matrix whitened = h * t_inv_sqrt;
  Eigen::JacobiSVD<Matrix> svd(whitened, Eigen::ComputeThinV);
  const RealVector& theta = svd.singularValues();
  RealVector sigma(theta.size());
  for (Index i = 0; i < theta.size(); ++i) {
    sigma(i) = theta(i) > 0.0 ? std::max(0.0, 1.0 / kLn2 - 1.0 / (theta(i) * theta(i))) : 0.0;
  }
  const Matrix& v = svd.matrixV();
  const Matrix s_hat = v * sigma.cast<Complex>().asDiagonal() * v.adjoint();
  out.covariance = hermitian_part(t_inv_sqrt * s_hat * t_inv_sqrt);
  return out;
}

CapacityProblem CapacityProblem::from_instance(const NetworkInstance& instance, double power,
                                               std::vector<double> interference) {
  if (instance.users() != 1) throw DomainError("capacity problem: instance must have exactly one link");
  CapacityProblem p;
  p.channel = instance.direct[0];
  if (!instance.pu.empty()) p.pu_channels = instance.pu[0];
  p.power = power;
  p.interference = std::move(interference);
  return p;
}

namespace {

void validate(const CapacityProblem& p) {
  const Index n = p.channel.cols();
  if (p.channel.rows() < 1 || n < 1) throw DomainError("capacity problem: empty channel");
  if (!all_finite(p.channel)) throw DomainError("capacity problem: non-finite channel entry");
  if (!(p.power > 0.0) || !std::isfinite(p.power)) throw DomainError("capacity problem: power budget must be positive and finite");
  if (p.interference.size() != p.pu_channels.size()) {
    throw DomainError("capacity problem: one interference budget per PU channel is required");
  }
  for (std::size_t j = 0; j < p.pu_channels.size(); ++j) {
    if (p.pu_channels[j].cols() != n) throw DomainError("capacity problem: PU channel column count differs from N");
    if (!all_finite(p.pu_channels[j])) throw DomainError("capacity problem: non-finite PU channel entry");
    if (!(p.interference[j] >= 0.0)) throw DomainError("capacity problem: interference budgets must be nonnegative");
  }
  if (p.price.size() > 0) {
    if (p.price.rows() != n || p.price.cols() != n) throw DomainError("capacity problem: price has wrong size");
    require_psd(p.price, "capacity problem price");
  }
}

std::string pipc_label(std::size_t j) { return "pipc_" + std::to_string(j + 1); }

/// Restriction of the problem to the null space of all zero-budget PU
/// channels.
struct Reduction {
  Matrix basis;  // N x r, orthonormal columns
  ChannelMatrix channel;
  std::vector<ChannelMatrix> pu;
  std::vector<std::size_t> pu_index;  // original index of every finite positive budget
  Matrix price;
};

Reduction reduce(const CapacityProblem& p) {
  const Index n = p.channel.cols();
  std::vector<std::size_t> zero;
  for (std::size_t j = 0; j < p.interference.size(); ++j) {
    if (p.interference[j] == 0.0) zero.push_back(j);
  }
  Reduction r;
  if (zero.empty()) {
    r.basis = Matrix::Identity(n, n);
  } else {
    Index rows = 0;
    for (auto j : zero) rows += p.pu_channels[j].rows();
    Matrix stacked(rows, n);
    Index at = 0;
    for (auto j : zero) {
      stacked.middleRows(at, p.pu_channels[j].rows()) = p.pu_channels[j];
      at += p.pu_channels[j].rows();
    }
    r.basis = null_space(stacked);
  }
  r.channel = p.channel * r.basis;
  for (std::size_t j = 0; j < p.interference.size(); ++j) {
    if (p.interference[j] > 0.0 && std::isfinite(p.interference[j])) {
      r.pu.push_back(p.pu_channels[j] * r.basis);
      r.pu_index.push_back(j);
    }
  }
  if (p.price.size() > 0) r.price = r.basis.adjoint() * p.price * r.basis;
  return r;
}

/// Rebuilds the constraint table in the original PU order.
void restate_constraints(const CapacityProblem& p, const Reduction& r, SolveReport& report) {
  const Matrix& s = report.covariances(0);
  std::vector<ConstraintReport> out;
  ConstraintReport ptpc;
  ptpc.label = "ptpc";
  ptpc.budget = p.power;
  ptpc.usage = s.trace().real();
  ptpc.multiplier = report.multipliers.size() > 0 ? report.multipliers(0) : 0.0;
  out.push_back(ptpc);
  for (std::size_t j = 0; j < p.pu_channels.size(); ++j) {
    ConstraintReport c;
    c.label = pipc_label(j);
    c.budget = p.interference[j];
    c.usage = interference_power(p.pu_channels[j], s);
    const auto it = std::find(r.pu_index.begin(), r.pu_index.end(), j);
    if (it != r.pu_index.end() && report.multipliers.size() > 0) {
      c.multiplier = report.multipliers(1 + (it - r.pu_index.begin()));
    }
    out.push_back(std::move(c));
  }
  report.constraints = std::move(out);
}

SolveReport zero_solution(const CapacityProblem& p, const Reduction& r) {
  SolveReport report;
  report.covariances = CovarianceSet::zeros({p.channel.cols()});
  report.converged = true;
  report.multipliers = RealVector::Zero(1 + static_cast<Index>(r.pu.size()));
  report.zero_only = true;
  report.warnings.push_back("zero-forcing null space is trivial; only S = 0 is feasible");
  restate_constraints(p, r, report);
  return report;
}

}  // namespace

SolveReport solve_capacity(const CapacityProblem& problem, const DualOptions& options) {
  validate(problem);
  const Reduction red = reduce(problem);
  const Index n = red.basis.cols();
  if (n == 0) return zero_solution(problem, red);

  const std::size_t j_count = red.pu.size();
  const bool priced = red.price.size() > 0;

  std::vector<Matrix> gram(j_count);
  for (std::size_t j = 0; j < j_count; ++j) gram[j] = red.pu[j].adjoint() * red.pu[j];

  DualProblem dp;
  dp.labels.push_back("ptpc");
  dp.budgets.resize(1 + static_cast<Index>(j_count));
  dp.budgets(0) = problem.power;
  for (std::size_t j = 0; j < j_count; ++j) {
    dp.labels.push_back(pipc_label(red.pu_index[j]));
    dp.budgets(1 + static_cast<Index>(j)) = problem.interference[red.pu_index[j]];
  }

  dp.objective = [&](const CovarianceSet& s) {
    const Matrix& cov = s(0);
    double value = log2det_identity_plus(red.channel * cov * red.channel.adjoint());
    if (priced) value -= (red.price * cov).trace().real();
    return value;
  };
  dp.usage = [&](const CovarianceSet& s) {
    const Matrix& cov = s(0);
    RealVector u(1 + static_cast<Index>(j_count));
    u(0) = cov.trace().real();
    for (std::size_t j = 0; j < j_count; ++j) u(1 + static_cast<Index>(j)) = (gram[j] * cov).trace().real();
    return u;
  };
  dp.evaluate = [&](const RealVector& eta) {
    Matrix t = Matrix::Identity(n, n) * eta(0);
    for (std::size_t j = 0; j < j_count; ++j) t += eta(1 + static_cast<Index>(j)) * gram[j];
    if (priced) t += red.price;
    auto wf = water_fill_penalized(red.channel, t);
    DualEvaluation e;
    e.point = CovarianceSet(1, 1);
    e.point(0) = std::move(wf.covariance);
    e.regularized = wf.regularized;
    e.value = dp.objective(e.point) - eta.dot(dp.usage(e.point) - dp.budgets);
    return e;
  };

  double level = problem.power / static_cast<double>(n);
  for (std::size_t j = 0; j < j_count; ++j) {
    const double g = gram[j].trace().real();
    if (g > 0.0) level = std::min(level, dp.budgets(1 + static_cast<Index>(j)) / g);
  }
  CovarianceSet slater(1, 1);
  slater(0) = Matrix::Identity(n, n) * (0.5 * level);
  dp.slater_point = std::move(slater);

  SolveReport report = solve_dual(dp, options);
  report.covariances(0) = hermitian_part(red.basis * report.covariances(0) * red.basis.adjoint());
  restate_constraints(problem, red, report);
  return report;
}

MisoBeamformer solve_miso_beamforming(const RowVector& h, const std::vector<ChannelMatrix>& pu_channels, double power,
                                      const std::vector<double>& interference, const DualOptions& options) {
  CapacityProblem p;
  p.channel = h;
  p.pu_channels = pu_channels;
  p.power = power;
  p.interference = interference;

  MisoBeamformer out;
  out.report = solve_capacity(p, options);
  const Matrix& s = out.report.covariances(0);
  const auto eig = hermitian_eig(s);
  const Index n = s.rows();
  out.largest_eigenvalue = std::max(0.0, eig.values(n - 1));
  out.second_eigenvalue = n >= 2 ? std::max(0.0, eig.values(n - 2)) : 0.0;
  if (out.second_eigenvalue > 1e-6 * out.largest_eigenvalue) {
    throw NumericalError("solve_miso_beamforming: optimal covariance is not rank one (eigenvalues " +
                         std::to_string(out.largest_eigenvalue) + ", " + std::to_string(out.second_eigenvalue) + ")");
  }
  Vector v = eig.vectors.col(n - 1) * std::sqrt(out.largest_eigenvalue);
  const Complex hv = (h * v)(0);
  if (std::abs(hv) > 0.0) v *= std::conj(hv) / std::abs(hv);
  out.beamformer = std::move(v);
  out.rate = out.report.objective;
  return out;
}

std::size_t max_nulled_directions(const CapacityProblem& problem) {
  Index pu_dims = 0;
  for (const auto& g : problem.pu_channels) pu_dims += g.rows();
  return static_cast<std::size_t>(std::min<Index>(problem.channel.cols() - 1, pu_dims));
}

SolveReport partial_projection(const CapacityProblem& problem, std::size_t nulled, const DualOptions& options) {
  validate(problem);
  if (nulled > max_nulled_directions(problem)) {
    throw DomainError("partial_projection: nulled direction count exceeds min(N - 1, sum D_j)");
  }
  const Index n = problem.channel.cols();
  const std::size_t j_total = problem.pu_channels.size();

  // Budget-normalized PU channel stack; zero budgets dominate the ordering,
  // infinite budgets contribute nothing.
  Matrix projector = Matrix::Identity(n, n);
  if (nulled > 0) {
    Index rows = 0;
    for (const auto& g : problem.pu_channels) rows += g.rows();
    Matrix stacked(rows, n);
    Index at = 0;
    for (std::size_t j = 0; j < j_total; ++j) {
      const double gamma = problem.interference[j];
      const double w = gamma == 0.0 ? 1e12 : (std::isfinite(gamma) ? 1.0 / gamma : 0.0);
      stacked.middleRows(at, problem.pu_channels[j].rows()) = problem.pu_channels[j] * w;
      at += problem.pu_channels[j].rows();
    }
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Matrix vb = svd.matrixV().leftCols(static_cast<Index>(nulled));
    projector -= vb * vb.adjoint();
  }
  const Matrix projected = problem.channel * projector;
  Eigen::JacobiSVD<Matrix> svd(projected, Eigen::ComputeThinV);
  const RealVector& gains = svd.singularValues();
  const double floor = 1e-12 * std::max(1.0, gains.size() > 0 ? gains(0) : 0.0);

  // Eigenmodes carrying no energy into zero-budget PUs.
  std::vector<Index> modes;
  for (Index i = 0; i < gains.size(); ++i) {
    if (gains(i) <= floor) continue;
    const Vector v = svd.matrixV().col(i);
    bool leaks = false;
    for (std::size_t j = 0; j < j_total; ++j) {
      if (problem.interference[j] == 0.0 && (problem.pu_channels[j] * v).squaredNorm() > 1e-20) leaks = true;
    }
    if (!leaks) modes.push_back(i);
  }

  std::vector<std::size_t> active;
  for (std::size_t j = 0; j < j_total; ++j) {
    if (problem.interference[j] > 0.0 && std::isfinite(problem.interference[j])) active.push_back(j);
  }

  const Index r = static_cast<Index>(modes.size());
  Matrix basis(n, r);
  RealVector gain2(r);
  RealMatrix leak(static_cast<Index>(active.size()), r);
  for (Index i = 0; i < r; ++i) {
    basis.col(i) = svd.matrixV().col(modes[i]);
    gain2(i) = gains(modes[i]) * gains(modes[i]);
    for (std::size_t a = 0; a < active.size(); ++a) {
      leak(static_cast<Index>(a), i) = (problem.pu_channels[active[a]] * basis.col(i)).squaredNorm();
    }
  }

  auto to_covariance = [&](const RealVector& p) {
    CovarianceSet s(1, 1);
    s(0) = basis * p.cast<Complex>().asDiagonal() * basis.adjoint();
    return s;
  };
  auto restate = [&](SolveReport& report) {
    const Matrix& s = report.covariances(0);
    std::vector<ConstraintReport> out;
    out.push_back({"ptpc", problem.power, s.trace().real(), report.multipliers.size() > 0 ? report.multipliers(0) : 0.0});
    for (std::size_t j = 0; j < j_total; ++j) {
      ConstraintReport c{pipc_label(j), problem.interference[j], interference_power(problem.pu_channels[j], s), 0.0};
      const auto it = std::find(active.begin(), active.end(), j);
      if (it != active.end() && report.multipliers.size() > 0) c.multiplier = report.multipliers(1 + (it - active.begin()));
      out.push_back(std::move(c));
    }
    report.constraints = std::move(out);
  };

  if (r == 0) {
    SolveReport report;
    report.covariances = CovarianceSet::zeros({n});
    report.converged = true;
    report.multipliers = RealVector::Zero(1 + static_cast<Index>(active.size()));
    restate(report);
    return report;
  }

  // Per-mode powers are recovered from the diagonal of basis^H S basis.
  auto powers_of = [&](const CovarianceSet& s) -> RealVector {
    return (basis.adjoint() * s(0) * basis).diagonal().real();
  };

  DualProblem dp;
  dp.labels.push_back("ptpc");
  dp.budgets.resize(1 + static_cast<Index>(active.size()));
  dp.budgets(0) = problem.power;
  for (std::size_t a = 0; a < active.size(); ++a) {
    dp.labels.push_back(pipc_label(active[a]));
    dp.budgets(1 + static_cast<Index>(a)) = problem.interference[active[a]];
  }
  dp.objective = [&](const CovarianceSet& s) {
    const RealVector p = powers_of(s);
    double acc = 0.0;
    for (Index i = 0; i < r; ++i) acc += std::log2(1.0 + gain2(i) * std::max(0.0, p(i)));
    return acc;
  };
  dp.usage = [&](const CovarianceSet& s) {
    const RealVector p = powers_of(s);
    RealVector u(dp.budgets.size());
    u(0) = p.sum();
    if (!active.empty()) u.tail(static_cast<Index>(active.size())) = leak * p;
    return u;
  };
  dp.evaluate = [&](const RealVector& eta) {
    RealVector cost = RealVector::Constant(r, eta(0));
    if (!active.empty()) cost += leak.transpose() * eta.tail(static_cast<Index>(active.size()));
    DualEvaluation e;
    RealVector p(r);
    for (Index i = 0; i < r; ++i) {
      double c = cost(i);
      if (c <= 1e-12) {
        c = 1e-12;
        e.regularized = true;
      }
      p(i) = std::max(0.0, 1.0 / (kLn2 * c) - 1.0 / gain2(i));
    }
    e.point = to_covariance(p);
    double value = 0.0;
    for (Index i = 0; i < r; ++i) value += std::log2(1.0 + gain2(i) * p(i)) - cost(i) * p(i);
    e.value = value + eta.dot(dp.budgets);
    return e;
  };
  double level = problem.power / static_cast<double>(r);
  for (std::size_t a = 0; a < active.size(); ++a) {
    const double total = leak.row(static_cast<Index>(a)).sum();
    if (total > 0.0) level = std::min(level, dp.budgets(1 + static_cast<Index>(a)) / total);
  }
  dp.slater_point = to_covariance(RealVector::Constant(r, 0.5 * level));

  SolveReport report = solve_dual(dp, options);
  restate(report);
  return report;
}

}  // namespace crdra
