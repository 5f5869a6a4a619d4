// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/dual_solver.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <vector>

namespace crdra {

/// Weighted sum-rate of a MIMO multiple-access channel with successive
/// decoding in reverse user order, written as
/// sum_m c_m log2|I + sum_{i<=m} H_i S_i H_i^H| with c_m = mu_m - mu_{m+1}
/// (mu_{K+1} = 0). Weights must be nonincreasing.
double weighted_sum_rate_mac(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s,
                             const std::vector<double>& weights, std::size_t dim = 0);

/// Per-user rates R_k = log2|I + sum_{i<=k} H_i S_i H_i^H| - log2|I + sum_{i<k} H_i S_i H_i^H|.
RealVector mac_user_rates(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s, std::size_t dim = 0);

/// sum_k mu_k R_k from `mac_user_rates`.
double weighted_sum_rate_mac_successive(const std::vector<ChannelMatrix>& channels, const CovarianceSet& s,
                                        const std::vector<double>& weights, std::size_t dim = 0);

struct InnerOptions {
  double tolerance = 1e-7;  // gradient-map norm
  std::size_t max_cycles = 2000;
  std::size_t max_block_steps = 50;
};

struct InnerResult {
  CovarianceSet covariances;
  double value = 0.0;
  std::size_t cycles = 0;
  bool converged = false;
  bool regularized = false;
};

/// Maximizes WSR(S) - sum_k Tr(B_k S_k) over PSD S_k by cyclic block
/// coordinate ascent. Blocks whose gradient involves a single log-det term
/// are solved exactly by water-filling; the rest take projected-gradient
/// steps. `warm` (same shapes, may be null) seeds the iteration.
InnerResult maximize_mac_lagrangian(const std::vector<ChannelMatrix>& channels, const std::vector<double>& weights,
                                    const std::vector<Matrix>& penalties, const CovarianceSet* warm = nullptr,
                                    const InnerOptions& options = {});

/// Maximizes WSR(S) subject to sum_k Tr(S_k) <= power by projected gradient
/// on the joint covariance.
InnerResult solve_mac_sum_power(const std::vector<ChannelMatrix>& channels, const std::vector<double>& weights,
                                double power, const CovarianceSet* warm = nullptr, const InnerOptions& options = {});

/// Weighted sum-rate for the multiple-access channel with one transmit power
/// budget per user and J interference budgets summed over all users.
struct MacProblem {
  std::vector<ChannelMatrix> channels;                 // H_k, M x N_k
  std::vector<std::vector<ChannelMatrix>> pu_channels;  // [k][j] G_kj, D_j x N_k
  std::vector<double> weights;                         // nonincreasing
  std::vector<double> power;                           // P_k > 0
  std::vector<double> interference;                    // Gamma_j >= 0; +inf disables

  static MacProblem from_instance(const NetworkInstance& instance, std::vector<double> power,
                                  std::vector<double> interference);
  void validate() const;
};

SolveReport solve_mac_wsr(const MacProblem& problem, const DualOptions& options = {},
                          const InnerOptions& inner = {});

}  // namespace crdra
