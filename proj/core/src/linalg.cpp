// SPDX-License-Identifier: Apache-2.0
#include "crdra/linalg.hpp"

#include "crdra/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crdra {

HermitianEig hermitian_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("hermitian eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

bool is_hermitian(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = std::max(1.0, a.norm());
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

void require_psd(const Matrix& s, const char* what) {
  if (s.rows() != s.cols()) {
    throw DomainError(std::string(what) + ": covariance is not square");
  }
  if (!all_finite(s)) {
    throw DomainError(std::string(what) + ": covariance has non-finite entries");
  }
  if (!is_hermitian(s)) {
    throw DomainError(std::string(what) + ": covariance is not Hermitian");
  }
  if (s.rows() == 0) return;
  const auto eig = hermitian_eig(s);
  const double trace = std::max(s.trace().real(), 0.0);
  if (eig.values.minCoeff() < -kPsdTolerance * std::max(trace, 1e-300)) {
    throw DomainError(std::string(what) + ": covariance is not positive semidefinite (min eigenvalue " +
                      std::to_string(eig.values.minCoeff()) + ")");
  }
}

Matrix psd_project(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("psd_project: matrix is not square");
  if (!is_hermitian(a, 1e-8)) throw DomainError("psd_project: matrix is not Hermitian");
  const auto eig = hermitian_eig(a);
  const RealVector clipped = eig.values.cwiseMax(0.0);
  return eig.vectors * clipped.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix hermitian_sqrt(const Matrix& a) {
  const auto eig = hermitian_eig(a);
  const RealVector root = eig.values.cwiseMax(0.0).cwiseSqrt();
  return eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

Matrix hermitian_inv_sqrt(const Matrix& a) {
  const auto eig = hermitian_eig(a);
  if (eig.values.size() > 0 && eig.values.minCoeff() <= 0.0) {
    throw DomainError("hermitian_inv_sqrt: matrix is not positive definite");
  }
  const RealVector root = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
}

double log2det(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    double acc = 0.0;
    for (Index i = 0; i < a.rows(); ++i) acc += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * acc / kLn2;
  }
  const auto eig = hermitian_eig(a);
  if (eig.values.minCoeff() <= 0.0) throw NumericalError("log2det: matrix is not positive definite");
  return eig.values.array().log().sum() / kLn2;
}

double log2det_identity_plus(const Matrix& x) {
  Matrix a = hermitian_part(x);
  a.diagonal().array() += 1.0;
  return log2det(a);
}

double rate_p2p(const ChannelMatrix& h, const Matrix& s) {
  if (h.cols() != s.rows()) throw DomainError("rate_p2p: channel/covariance dimension mismatch");
  require_psd(s, "rate_p2p");
  return std::max(0.0, log2det_identity_plus(h * s * h.adjoint()));
}

double interference_power(const ChannelMatrix& g, const Matrix& s) {
  if (g.cols() != s.rows() || s.rows() != s.cols()) {
    throw DomainError("interference_power: channel/covariance dimension mismatch");
  }
  return std::max(0.0, (g * s * g.adjoint()).trace().real());
}

RealVector project_capped_simplex(const RealVector& y, double cap) {
  RealVector clipped = y.cwiseMax(0.0);
  if (clipped.sum() <= cap) return clipped;
  // Find tau > 0 with sum(max(y - tau, 0)) = cap.
  std::vector<double> sorted(y.data(), y.data() + y.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double tau = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    prefix += sorted[i];
    const double candidate = (prefix - cap) / static_cast<double>(i + 1);
    if (i + 1 == sorted.size() || sorted[i + 1] <= candidate) {
      tau = candidate;
      break;
    }
  }
  return (y.array() - tau).cwiseMax(0.0).matrix();
}

Matrix null_space(const Matrix& a, double rel_tol) {
  const Index n = a.cols();
  if (a.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const RealVector& sv = svd.singularValues();
  const double threshold = rel_tol * std::max(1.0, sv.size() > 0 ? sv(0) : 0.0);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > threshold) ++rank;
  }
  return svd.matrixV().rightCols(n - rank);
}

bool all_finite(const Matrix& a) { return a.allFinite(); }

}  // namespace crdra
