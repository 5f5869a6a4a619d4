// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/types.hpp"

namespace crdra {

inline constexpr double kLn2 = 0.69314718055994530942;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
struct HermitianEig {
  RealVector values;
  Matrix vectors;
};

HermitianEig hermitian_eig(const Matrix& a);

/// (A + A^H) / 2.
Matrix hermitian_part(const Matrix& a);

bool is_hermitian(const Matrix& a, double rel_tol = 1e-9);

/// Throws DomainError if `s` is not Hermitian or has an eigenvalue below
/// -kPsdTolerance * trace.
void require_psd(const Matrix& s, const char* what);

/// Frobenius-nearest PSD matrix: eigenvalues clipped at zero.
Matrix psd_project(const Matrix& a);

/// A^{1/2} and A^{-1/2} for Hermitian positive definite A.
Matrix hermitian_sqrt(const Matrix& a);
Matrix hermitian_inv_sqrt(const Matrix& a);

/// log2 det(I + X) for Hermitian PSD X.
double log2det_identity_plus(const Matrix& x);

/// log2 det(A) for Hermitian positive definite A.
double log2det(const Matrix& a);

/// log2 det(I + H S H^H); the point-to-point achievable rate in bits per use.
double rate_p2p(const ChannelMatrix& h, const Matrix& s);

/// Tr(G S G^H); received interference power at a PU.
double interference_power(const ChannelMatrix& g, const Matrix& s);

/// Euclidean projection onto {x >= 0, sum(x) <= cap}.
RealVector project_capped_simplex(const RealVector& y, double cap);

/// Orthonormal basis of the null space of `a` (columns), possibly empty.
Matrix null_space(const Matrix& a, double rel_tol = 1e-10);

/// True when every entry is finite.
bool all_finite(const Matrix& a);

}  // namespace crdra
