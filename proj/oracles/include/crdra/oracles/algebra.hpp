// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace crdra::oracles {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Laplace expansion along the first row. Exponential cost; small matrices only.
Complex cofactor_det(const CMatrix& a);

/// log2 det(I + H S H^H) with the determinant from `cofactor_det`.
double cofactor_rate(const CMatrix& h, const CMatrix& s);

/// sum_d sum_a sum_b G(d,a) S(a,b) conj(G(d,b)).
double expanded_interference(const CMatrix& g, const CMatrix& s);

/// Random Hermitian PSD matrix with the given trace (Wishart-like draw with
/// random rank).
CMatrix random_psd(Eigen::Index n, double trace, std::mt19937_64& rng);

/// Random Hermitian matrix with N(0, 1) real and imaginary parts.
CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng);

/// Tries `trials` PSD matrices near `candidate` (random Hermitian
/// perturbations of size `scale`, kept only if still PSD) and returns
/// min ||a - q||_F - ||a - candidate||_F over them. Negative means a closer
/// PSD matrix was found.
double nearest_psd_margin(const CMatrix& a, const CMatrix& candidate, int trials, double scale, std::uint64_t seed);

/// Best value of log2 det(I + H S H^H) - Re Tr(T S) over `trials` random PSD
/// matrices S with traces spread over [0, max_trace].
double sampled_penalized_max(const CMatrix& h, const CMatrix& t, int trials, double max_trace, std::uint64_t seed);

/// Successive-decoding rates written as quotients:
/// R_k = log2 det(I + (I + sum_{i<k} H_i S_i H_i^H)^{-1} H_k S_k H_k^H).
std::vector<double> mac_rates_quotient(const std::vector<CMatrix>& channels, const std::vector<CMatrix>& covariances);

/// Interference-as-noise rates of a two-link scalar interference channel:
/// log2(1 + p_k g_kk / (1 + p_i g_ik)), g_ik the gain from TX i to RX k.
std::vector<double> scalar_ic_rates(double g11, double g22, double g21_to_1, double g12_to_2, double p1, double p2);

/// max_{p >= 0} log2(1 + g p) - b p.
double penalized_scalar_rate(double gain, double price);

/// E log2(1 + kappa / (1 + I)) for I = gamma and for I in {gamma (1 - spread),
/// gamma (1 + spread)} with equal probability.
struct TwoPointDiversity {
  double constant = 0.0;
  double fluctuating = 0.0;
};
TwoPointDiversity two_point_diversity(double kappa, double gamma, double spread);

/// Average of log2(1 + hp Q / (1 + hsp ps)) over states, summed term by term.
double pu_ergodic_capacity(const std::vector<double>& hp, const std::vector<double>& hsp, double q,
                           const std::vector<double>& ps);

}  // namespace crdra::oracles
