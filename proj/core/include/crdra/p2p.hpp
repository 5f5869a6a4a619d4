// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/dual_solver.hpp"
#include "crdra/report.hpp"
#include "crdra/types.hpp"

#include <vector>

namespace crdra {

struct WaterFillResult {
  Matrix covariance;
  bool regularized = false;
};

/// Maximizes log2|I + H S H^H| - Tr(T S) over S >= 0 for Hermitian T > 0.
///
/// With H T^{-1/2} = U diag(theta) V^H the maximizer is
/// T^{-1/2} V diag(sigma) V^H T^{-1/2}, sigma_i = max(0, 1/ln2 - 1/theta_i^2).
/// A singular T is regularized by 1e-12 I and flagged.
WaterFillResult water_fill_penalized(const ChannelMatrix& h, const Matrix& t);

/// Single-link capacity under one transmit-power budget and J
/// interference-power budgets at primary receivers.
struct CapacityProblem {
  ChannelMatrix channel;                   // H, M x N
  std::vector<ChannelMatrix> pu_channels;  // G_j, D_j x N
  double power = 0.0;                      // P > 0
  std::vector<double> interference;        // Gamma_j >= 0; +inf disables the constraint
  /// Optional Hermitian PSD N x N price; the objective becomes
  /// log2|I + H S H^H| - Tr(price S). Empty means zero.
  Matrix price;

  static CapacityProblem from_instance(const NetworkInstance& instance, double power, std::vector<double> interference);
};

/// Exact solution through the Lagrange dual and the ellipsoid method.
///
/// Zero interference budgets are enforced exactly by restricting S to the
/// null space of the corresponding PU channels (zero-forcing); if that null
/// space is trivial the result is S = 0. Infinite budgets are dropped from the
/// dual but still reported.
SolveReport solve_capacity(const CapacityProblem& problem, const DualOptions& options = {});

struct MisoBeamformer {
  Vector beamformer;  // v with h v real and nonnegative
  double rate = 0.0;
  double largest_eigenvalue = 0.0;
  double second_eigenvalue = 0.0;
  SolveReport report;
};

/// Single-receive-antenna case: solves the capacity problem and extracts the
/// rank-one optimum v v^H. Throws NumericalError if the solution is not rank
/// one within 1e-6.
MisoBeamformer solve_miso_beamforming(const RowVector& h, const std::vector<ChannelMatrix>& pu_channels, double power,
                                      const std::vector<double>& interference, const DualOptions& options = {});

/// min(N - 1, sum_j D_j).
std::size_t max_nulled_directions(const CapacityProblem& problem);

/// Heuristic: null the `nulled` strongest directions of the stacked,
/// budget-normalized PU channels, then allocate power over the eigenmodes of
/// the projected channel under all J + 1 budgets.
SolveReport partial_projection(const CapacityProblem& problem, std::size_t nulled, const DualOptions& options = {});

}  // namespace crdra
