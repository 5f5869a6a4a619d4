// SPDX-License-Identifier: Apache-2.0
#include "crdra/oracles/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace crdra::oracles {

Complex cofactor_det(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 1.0;
  if (n == 1) return a(0, 0);
  Complex acc = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    CMatrix minor(n - 1, n - 1);
    for (Eigen::Index r = 1; r < n; ++r) {
      Eigen::Index cc = 0;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (k == c) continue;
        minor(r - 1, cc++) = a(r, k);
      }
    }
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    acc += sign * a(0, c) * cofactor_det(minor);
  }
  return acc;
}

double cofactor_rate(const CMatrix& h, const CMatrix& s) {
  const CMatrix m = CMatrix::Identity(h.rows(), h.rows()) + h * s * h.adjoint();
  return std::log2(cofactor_det(m).real());
}

double expanded_interference(const CMatrix& g, const CMatrix& s) {
  Complex acc = 0.0;
  for (Eigen::Index d = 0; d < g.rows(); ++d) {
    for (Eigen::Index a = 0; a < g.cols(); ++a) {
      for (Eigen::Index b = 0; b < g.cols(); ++b) acc += g(d, a) * s(a, b) * std::conj(g(d, b));
    }
  }
  return acc.real();
}

namespace {

CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

double log2det_lu(const CMatrix& m) { return std::log2(std::abs(m.fullPivLu().determinant())); }

}  // namespace

CMatrix random_psd(Eigen::Index n, double trace, std::mt19937_64& rng) {
  std::uniform_int_distribution<Eigen::Index> rank(1, n);
  const CMatrix x = gaussian(n, rank(rng), rng);
  CMatrix s = x * x.adjoint();
  const double tr = s.trace().real();
  return tr > 0.0 ? CMatrix(s * (trace / tr)) : CMatrix(CMatrix::Zero(n, n));
}

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix x = gaussian(n, n, rng);
  return (x + x.adjoint()) * 0.5;
}

double nearest_psd_margin(const CMatrix& a, const CMatrix& candidate, int trials, double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double base = (a - candidate).norm();
  double margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    const CMatrix q = candidate + scale * random_hermitian(a.rows(), rng);
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(q, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < 0.0) continue;
    margin = std::min(margin, (a - q).norm() - base);
  }
  return margin;
}

double sampled_penalized_max(const CMatrix& h, const CMatrix& t, int trials, double max_trace, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Eigen::Index m = h.rows();
  double best = 0.0;  // S = 0
  for (int i = 0; i < trials; ++i) {
    const CMatrix s = random_psd(h.cols(), max_trace * u(rng), rng);
    const double v = log2det_lu(CMatrix::Identity(m, m) + h * s * h.adjoint()) - (t * s).trace().real();
    best = std::max(best, v);
  }
  return best;
}

std::vector<double> mac_rates_quotient(const std::vector<CMatrix>& channels, const std::vector<CMatrix>& covariances) {
  const Eigen::Index m = channels.front().rows();
  CMatrix noise = CMatrix::Identity(m, m);
  std::vector<double> rates;
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const CMatrix signal = channels[k] * covariances[k] * channels[k].adjoint();
    rates.push_back(log2det_lu(CMatrix::Identity(m, m) + noise.inverse() * signal));
    noise += signal;
  }
  return rates;
}

std::vector<double> scalar_ic_rates(double g11, double g22, double g21_to_1, double g12_to_2, double p1, double p2) {
  return {std::log2(1.0 + p1 * g11 / (1.0 + p2 * g21_to_1)), std::log2(1.0 + p2 * g22 / (1.0 + p1 * g12_to_2))};
}

double penalized_scalar_rate(double gain, double price) {
  if (gain <= 0.0) return 0.0;
  const double p = std::max(0.0, 1.0 / (price * std::log(2.0)) - 1.0 / gain);
  return std::log2(1.0 + gain * p) - price * p;
}

TwoPointDiversity two_point_diversity(double kappa, double gamma, double spread) {
  TwoPointDiversity d;
  d.constant = std::log2(1.0 + kappa / (1.0 + gamma));
  d.fluctuating = 0.5 * std::log2(1.0 + kappa / (1.0 + gamma * (1.0 - spread))) +
                  0.5 * std::log2(1.0 + kappa / (1.0 + gamma * (1.0 + spread)));
  return d;
}

double pu_ergodic_capacity(const std::vector<double>& hp, const std::vector<double>& hsp, double q,
                           const std::vector<double>& ps) {
  double acc = 0.0;
  for (std::size_t i = 0; i < hp.size(); ++i) acc += std::log2(1.0 + hp[i] * q / (1.0 + hsp[i] * ps[i]));
  return acc / static_cast<double>(hp.size());
}

}  // namespace crdra::oracles
