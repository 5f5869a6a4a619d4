// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/dual_solver.hpp"
#include "crdra/mac.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <string>
#include <vector>

namespace crdra {

/// Broadcast channel from an M-antenna base station. Channels are stored in
/// uplink form: user k receives y_k = H_k^H x + z_k.
struct BcProblem {
  std::vector<ChannelMatrix> channels;     // H_k, M x N_k
  std::vector<ChannelMatrix> pu_channels;  // F_j, D_j x M
  std::vector<double> weights;             // nonincreasing
  double power = 0.0;
  std::vector<double> interference;  // Gamma_j >= 0; +inf disables

  static BcProblem from_instance(const NetworkInstance& instance, double power, std::vector<double> interference);
  void validate() const;
};

/// lambda_0 I + sum_j lambda_j F_j^H F_j and lambda_0 P + sum_j lambda_j Gamma_j.
struct GltccCombination {
  RealVector lambda;
  Matrix a;
  double budget = 0.0;
  bool regularized = false;  // a + 1e-10 I was used

  /// `pu_channels`/`interference` hold only the finite, positive budgets;
  /// `m` is the number of transmit antennas.
  static GltccCombination make(const std::vector<ChannelMatrix>& pu_channels, double power,
                               const std::vector<double>& interference, const RealVector& lambda, Index m);
};

/// Dirty-paper rates with user k interfered only by users i > k:
/// R_k = log2|I + H_k^H (sum_{i>=k} Q_i) H_k| - log2|I + H_k^H (sum_{i>k} Q_i) H_k|.
RealVector bc_user_rates(const std::vector<ChannelMatrix>& channels, const CovarianceSet& q);
double weighted_sum_rate_bc(const std::vector<ChannelMatrix>& channels, const CovarianceSet& q,
                            const std::vector<double>& weights);

/// Maps dual-MAC covariances (unit noise, user k interfered by i < k) to
/// broadcast covariances with the same per-user rates and the same total
/// power.
CovarianceSet mac_to_bc(const std::vector<ChannelMatrix>& channels, const CovarianceSet& mac);

struct DualMacBound {
  double value = 0.0;           // F(lambda)
  CovarianceSet mac_covariances;  // in whitened dual-MAC coordinates
  CovarianceSet bc_covariances;   // broadcast covariances, Tr(A sum Q_k) = budget
  RealVector mac_rates;
  RealVector bc_rates;
  bool regularized = false;
  bool converged = false;
};

/// F(lambda): weighted sum-rate of the dual MAC with noise covariance A and
/// sum power Q, solved after whitening by A^{-1/2}. Also returns the
/// corresponding broadcast covariances. Throws NumericalError if the
/// transformed rates disagree with the dual-MAC rates by more than 1e-3.
/// `lambda` has one entry for the power budget followed by one per finite,
/// positive interference budget.
DualMacBound dual_mac_bound(const BcProblem& problem, const RealVector& lambda, const CovarianceSet* warm = nullptr,
                            const InnerOptions& inner = {});

/// Minimizes F over lambda >= 0 (normalized by sum lambda >= 1) and returns
/// broadcast covariances feasible for the original budgets.
SolveReport solve_bc_wsr(const BcProblem& problem, const DualOptions& options = {}, const InnerOptions& inner = {});

/// Multiple-input single-output broadcast channel: y_k = h_k^H x + z_k.
struct MisoBcProblem {
  std::vector<Vector> channels;            // h_k, length M
  std::vector<ChannelMatrix> pu_channels;  // F_j, D_j x M
  double power = 0.0;
  std::vector<double> interference;

  static MisoBcProblem from_instance(const NetworkInstance& instance, double power, std::vector<double> interference);
  void validate() const;
};

enum class Feasibility { Feasible, Infeasible, Indeterminate };
std::string to_string(Feasibility f);

struct BalanceCheck {
  Feasibility status = Feasibility::Indeterminate;
  std::vector<Vector> beamformers;  // filled when feasible
  RealVector sinr;
  RealVector usage;  // power, then one entry per PU
  std::size_t iterations = 0;
  std::string note;
};

struct BalanceOptions {
  std::size_t max_fixed_point_iterations = 10000;
  std::size_t max_ellipsoid_iterations = 400;
};

/// Decides whether every user can reach SINR >= alpha under the power and
/// interference budgets.
BalanceCheck check_balance_feasible(const MisoBcProblem& problem, double alpha, const BalanceOptions& options = {});

struct BalanceResult {
  double alpha_star = 0.0;
  std::vector<Vector> beamformers;
  RealVector sinr;
  double power_usage = 0.0;
  std::vector<double> interference_usage;
  std::size_t bisection_steps = 0;
  std::vector<std::string> warnings;
};

/// Max-min SINR by bisection on alpha over [0, max_k P |h_k|^2] until the
/// bracket is narrower than `tolerance`.
BalanceResult solve_sinr_balancing(const MisoBcProblem& problem, double tolerance = 1e-5,
                                   const BalanceOptions& options = {});

/// SINR_k = |h_k^H v_k|^2 / (1 + sum_{i != k} |h_k^H v_i|^2).
RealVector downlink_sinr(const std::vector<Vector>& channels, const std::vector<Vector>& beamformers);

}  // namespace crdra
