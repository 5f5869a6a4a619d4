// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/dual_solver.hpp"
#include "crdra/mac.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace crdra {

/// L channel realizations of one multiple-access network with average
/// transmit and interference budgets.
struct FadingScenario {
  std::vector<NetworkInstance> dimensions;  // MAC role, same topology
  std::vector<double> power;                // average power budget per user
  std::vector<double> interference;         // average interference budget per PU; +inf disables
  std::vector<double> weights;              // nonincreasing; used by MacWsr

  static FadingScenario generate(const Topology& topology, const FadingProcess& fading, std::vector<double> power,
                                 std::vector<double> interference);
  void validate() const;
  std::size_t users() const { return dimensions.empty() ? 0 : dimensions.front().users(); }
  std::size_t size() const { return dimensions.size(); }
};

enum class DraUtility {
  MacWsr,       // weighted sum-rate with successive decoding in every dimension
  TdmaSumRate,  // sum-rate with at most one active user per dimension
};

/// Multipliers of the average power (nu) and average interference (delta) budgets.
struct DualPair {
  RealVector nu;
  RealVector delta;
};

/// nu_k I + sum_j delta_j G_kj^H G_kj for user k in one dimension.
Matrix penalty_matrix(const NetworkInstance& dimension, const DualPair& pair, std::size_t user);

struct TdmaChoice {
  std::optional<std::size_t> user;  // empty when no user has a positive value
  Matrix covariance;
  double value = 0.0;
  RealVector values;  // per-user subproblem values
};

/// Best single user for one dimension under the given multipliers; ties go
/// to the lowest index.
TdmaChoice tdma_subproblem(const NetworkInstance& dimension, const DualPair& pair);

struct DraResult {
  SolveReport report;  // covariances indexed (user, dimension)
  /// (dual bound - objective) / max(|objective|, 1e-12).
  double relative_gap = 0.0;
};

DraResult solve_dra(const FadingScenario& scenario, DraUtility utility, const DualOptions& options = {},
                    const InnerOptions& inner = {});

enum class InterferenceLaw {
  Constant,     // always Gamma
  Exponential,  // mean Gamma
  TwoPoint,     // Gamma (1 - spread) or Gamma (1 + spread), each with probability 1/2
};

struct InterferenceDistribution {
  InterferenceLaw law = InterferenceLaw::Exponential;
  double spread = 1.0;
};

struct DiversityEstimate {
  double constant = 0.0;     // E log2(1 + h_p Q / (1 + Gamma))
  double fluctuating = 0.0;  // E log2(1 + h_p Q / (1 + I)), E I = Gamma
  double constant_se = 0.0;
  double fluctuating_se = 0.0;
  double difference_se = 0.0;  // standard error of the paired difference
  std::size_t samples = 0;
};

/// Paired Monte Carlo estimate: one interference draw per PU channel sample,
/// from an engine seeded with `seed`.
DiversityEstimate interference_diversity(const RealVector& pu_gains, double pu_power, double gamma,
                                         const InterferenceDistribution& distribution, std::uint64_t seed);

/// Same quantities with the expectation over a Constant or TwoPoint law
/// computed exactly; only the PU channel samples are averaged.
DiversityEstimate interference_diversity_exact(const RealVector& pu_gains, double pu_power, double gamma,
                                               const InterferenceDistribution& distribution);

/// Unit-mean exponential power gains (Rayleigh amplitudes).
RealVector rayleigh_power_gains(std::size_t count, std::uint64_t seed);

struct PuLinkModel {
  RealVector pu_gains;  // h_p per state
  RealVector su_gains;  // h_sp per state
  double pu_power = 0.0;
  double gamma = 0.0;
  double min_capacity = 0.0;
};

struct PuCapacityCheck {
  double value = 0.0;
  bool satisfied = false;
};

/// Evaluates E log2(1 + h_p Q / (1 + h_sp p_s)) against the minimum ergodic
/// capacity for the given secondary power per state.
PuCapacityCheck pu_capacity_constraint(const PuLinkModel& model, const RealVector& su_power);

}  // namespace crdra
