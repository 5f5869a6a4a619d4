// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/oracles/algebra.hpp"

#include <functional>
#include <vector>

namespace crdra::oracles {

using Objective = std::function<double(const std::vector<double>&)>;

/// Compass search maximizing `f` inside the box [lo, hi], starting at `x`
/// (updated in place). Halves the step when no axis move improves.
double refine_box(const Objective& f, std::vector<double>& x, const std::vector<double>& lo,
                  const std::vector<double>& hi, double step, double min_step = 1e-9);

/// Shrinking-box search: each round evaluates a 5-per-axis grid of half-width
/// `width` (relative to the box) around `x` and moves to the best point; the
/// width halves when the center stays. Follows ridges that stall a compass
/// search.
double zoom_box(const Objective& f, std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi, double width, int rounds);

/// Evaluates `f` on a uniform tensor grid (endpoints included) and refines
/// the eight best points with `refine_box` followed by `zoom_box`. Returns the refined maximum; `points`
/// counts grid evaluations.
struct GridSearch {
  double value = 0.0;
  std::vector<double> argmax;
  std::size_t points = 0;
};
GridSearch grid_then_refine(const Objective& f, const std::vector<double>& lo, const std::vector<double>& hi,
                            const std::vector<int>& steps);

/// Two-antenna transmitter: max log2 det(I + H S H^H) over S = t U diag(s, 1 - s) U^H
/// with U the unitary of (angle, phase), t the largest scale meeting
/// Tr(S) <= power and Tr(G_j S G_j^H) <= gamma_j. A second search covers
/// the covariances at which the power and one interference budget are both
/// tight; `argmax` refers to the first search.
GridSearch p2p_covariance_grid(const CMatrix& h, const std::vector<CMatrix>& pu, double power,
                               const std::vector<double>& gamma, int steps);

/// Two-antenna transmitter, single receive antenna: max log2(1 + |h v|^2)
/// over beamformers v = sqrt(t) (cos a, sin a e^{i b}) at the largest
/// feasible t.
GridSearch miso_polar_grid(const CMatrix& h_row, const std::vector<CMatrix>& pu, double power,
                           const std::vector<double>& gamma, int steps);

/// Two single-antenna users into a single-antenna receiver, user 1 decoded
/// last: mu_1 log2(1 + g1 p1) + mu_2 log2(1 + g2 p2 / (1 + g1 p1)) over the
/// power box with one interference budget e1 p1 + e2 p2 <= gamma.
GridSearch mac_scalar_grid(double g1, double g2, double e1, double e2, double mu1, double mu2, double p1_max,
                           double p2_max, double gamma, int steps);

/// Single-antenna broadcast to two users, user 2 free of interference:
/// mu_1 log2(1 + g1 p1 / (1 + g1 p2)) + mu_2 log2(1 + g2 p2) with
/// p1 + p2 <= power and f (p1 + p2) <= gamma.
GridSearch bc_scalar_grid(double g1, double g2, double f, double mu1, double mu2, double power, double gamma,
                          int steps);

/// Two-antenna broadcast to two single-antenna users with rank-one
/// covariances p_k u_k u_k^H; receiver k sees h_k^H x and is interfered by
/// user 2 when k = 1. One single-antenna PU with channel f_row.
GridSearch bc_rank1_grid(const CVector& h1, const CVector& h2, const CMatrix& f_row, double mu1, double mu2,
                         double power, double gamma, int steps);

/// Largest common SINR for two single-antenna users of a two-antenna
/// transmitter with unit beam directions u1, u2 held fixed; powers solve the
/// 2x2 SINR equations exactly and must meet the power and PU budgets.
double balanced_sinr_fixed_directions(const CVector& h1, const CVector& h2, const CMatrix& f_row, double power,
                                      double gamma, const CVector& u1, const CVector& u2);

/// Maximizes `balanced_sinr_fixed_directions` over both directions.
GridSearch balance_direction_grid(const CVector& h1, const CVector& h2, const CMatrix& f_row, double power,
                                  double gamma, int steps);

/// Direct check of given beamformers: SINR_k = |h_k^H v_k|^2 / (1 + sum_{i != k} |h_k^H v_i|^2)
/// against alpha, and the power and PU budgets (relative slack `tol`).
bool beamformers_achieve(const std::vector<CVector>& h, const std::vector<CVector>& v, const std::vector<CMatrix>& pu,
                         double power, const std::vector<double>& gamma, double alpha, double tol);

/// max_v |h^H v|^2 s.t. ||v||^2 <= power, |f v|^2 <= gamma, for a
/// single-antenna PU: the beam's component along f is x <= sqrt(gamma)/||f||
/// and the value is (a x + b sqrt(power - x^2))^2 with a, b the components of h
/// along and orthogonal to f.
double single_user_balance_closed_form(const CVector& h, const CMatrix& f_row, double power, double gamma);

/// Ergodic water-filling: max mean log2(1 + g_l p_l) s.t. mean p_l <= power,
/// by bisection on the water level.
double ergodic_water_filling(const std::vector<double>& gains, double power);

/// Two-user scalar fading MAC over L states with average power budgets:
/// min over a multiplier grid (refined) of the dual function, each state
/// maximized on its own refined power grid.
double fading_mac_nested_grid(const std::vector<double>& g1, const std::vector<double>& g2, double mu1, double mu2,
                              double p1_avg, double p2_avg, int multiplier_steps, int power_steps);

/// Two-link scalar interference channel: best weighted sum-rate on a
/// steps x steps grid over p_k in [0, min(P_k, split_k / e_k)].
double ic_scalar_grid(double g11, double g22, double g21_to_1, double g12_to_2, double e1, double e2, double p1_max,
                      double p2_max, double split1, double split2, double mu1, double mu2, int steps);

}  // namespace crdra::oracles
