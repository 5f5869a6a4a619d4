// SPDX-License-Identifier: Apache-2.0
#include "crdra/oracles/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace crdra::oracles {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

CVector direction(double angle, double phase) {
  CVector u(2);
  u(0) = std::cos(angle);
  u(1) = std::sin(angle) * std::polar(1.0, phase);
  return u;
}

double log2det_lu(const CMatrix& m) { return std::log2(std::abs(m.fullPivLu().determinant())); }

// Largest t with t * usage_j <= budget_j for every j, capped at `cap`.
double largest_scale(double cap, const std::vector<double>& usage, const std::vector<double>& budget) {
  double t = cap;
  for (std::size_t j = 0; j < usage.size(); ++j) {
    if (!std::isfinite(budget[j]) || usage[j] <= 0.0) continue;
    t = std::min(t, budget[j] / usage[j]);
  }
  return t;
}

}  // namespace

double refine_box(const Objective& f, std::vector<double>& x, const std::vector<double>& lo,
                  const std::vector<double>& hi, double step, double min_step) {
  double best = f(x);
  std::size_t budget = 200000;
  while (step >= min_step && budget > 0) {
    bool moved = false;
    for (std::size_t d = 0; d < x.size() && budget > 0; ++d) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> y = x;
        y[d] = std::clamp(x[d] + sign * step * (hi[d] - lo[d]), lo[d], hi[d]);
        if (y[d] == x[d]) continue;
        const double v = f(y);
        --budget;
        if (v > best) {
          best = v;
          x = std::move(y);
          moved = true;
          break;
        }
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

double zoom_box(const Objective& f, std::vector<double>& x, const std::vector<double>& lo,
                const std::vector<double>& hi, double width, int rounds) {
  constexpr int kPerAxis = 5;
  const std::size_t dims = x.size();
  double best = f(x);
  for (int round = 0; round < rounds && width > 1e-10; ++round) {
    const std::vector<double> center = x;
    std::vector<int> idx(dims, 0);
    std::vector<double> y(dims);
    while (true) {
      for (std::size_t d = 0; d < dims; ++d) {
        const double offset = width * (hi[d] - lo[d]) * (2.0 * idx[d] / (kPerAxis - 1) - 1.0);
        y[d] = std::clamp(center[d] + offset, lo[d], hi[d]);
      }
      const double v = f(y);
      if (v > best) {
        best = v;
        x = y;
      }
      std::size_t d = 0;
      while (d < dims && ++idx[d] == kPerAxis) idx[d++] = 0;
      if (d == dims) break;
    }
    if (x == center) width *= 0.5;
  }
  return best;
}

GridSearch grid_then_refine(const Objective& f, const std::vector<double>& lo, const std::vector<double>& hi,
                            const std::vector<int>& steps) {
  constexpr std::size_t kStarts = 8;
  const std::size_t dims = lo.size();
  GridSearch out;
  out.value = kNegInf;
  std::vector<std::pair<double, std::vector<double>>> starts;  // best grid points, descending
  std::vector<int> idx(dims, 0);
  std::vector<double> x(dims);
  while (true) {
    for (std::size_t d = 0; d < dims; ++d) {
      x[d] = steps[d] > 1 ? lo[d] + (hi[d] - lo[d]) * idx[d] / (steps[d] - 1) : lo[d];
    }
    const double v = f(x);
    ++out.points;
    if (starts.size() < kStarts || v > starts.back().first) {
      auto at = std::find_if(starts.begin(), starts.end(), [&](const auto& s) { return v > s.first; });
      starts.insert(at, {v, x});
      if (starts.size() > kStarts) starts.pop_back();
    }
    std::size_t d = 0;
    while (d < dims && ++idx[d] == steps[d]) idx[d++] = 0;
    if (d == dims) break;
  }
  out.value = starts.front().first;
  out.argmax = starts.front().second;
  double step = 1.0;
  for (int s : steps) step = std::min(step, 1.0 / std::max(1, s - 1));
  for (auto& [value, point] : starts) {
    double refined = std::max(value, refine_box(f, point, lo, hi, step));
    refined = std::max(refined, zoom_box(f, point, lo, hi, step, 400));
    if (refined > out.value) {
      out.value = refined;
      out.argmax = point;
    }
  }
  return out;
}

GridSearch p2p_covariance_grid(const CMatrix& h, const std::vector<CMatrix>& pu, double power,
                               const std::vector<double>& gamma, int steps) {
  const Eigen::Index m = h.rows();
  auto basis = [](double angle, double phase) {
    const CVector u1 = direction(angle, phase);
    CVector u2(2);
    u2(0) = -std::conj(u1(1));
    u2(1) = std::conj(u1(0));
    return std::pair{u1, u2};
  };
  auto rate = [&](const CMatrix& s0) {
    std::vector<double> usage;
    for (const auto& g : pu) usage.push_back((g * s0 * g.adjoint()).trace().real());
    const double t = largest_scale(power, usage, gamma);
    return log2det_lu(CMatrix::Identity(m, m) + t * h * s0 * h.adjoint());
  };
  auto f = [&](const std::vector<double>& x) {
    const auto [u1, u2] = basis(x[1], x[2]);
    return rate(x[0] * u1 * u1.adjoint() + (1.0 - x[0]) * u2 * u2.adjoint());
  };
  GridSearch out = grid_then_refine(f, {0.0, 0.0, 0.0}, {1.0, kPi / 2, 2 * kPi}, {steps, steps, 2 * steps});

  // When the power and one interference budget bind together the optimum
  // sits on a ridge of f. For a fixed basis the interference is linear in
  // the split, so the ridge is the surface where it equals gamma_j / power.
  for (std::size_t j = 0; j < pu.size(); ++j) {
    if (!std::isfinite(gamma[j])) continue;
    auto on_ridge = [&](const std::vector<double>& x) {
      const auto [u1, u2] = basis(x[0], x[1]);
      const double c1 = (pu[j] * u1).squaredNorm();
      const double c2 = (pu[j] * u2).squaredNorm();
      const double target = gamma[j] / power;
      if (std::abs(c1 - c2) < 1e-14) return kNegInf;
      const double split = (target - c2) / (c1 - c2);
      if (!(split >= 0.0 && split <= 1.0)) return kNegInf;
      return rate(split * u1 * u1.adjoint() + (1.0 - split) * u2 * u2.adjoint());
    };
    const GridSearch ridge = grid_then_refine(on_ridge, {0.0, 0.0}, {kPi / 2, 2 * kPi}, {steps, 2 * steps});
    out.points += ridge.points;
    if (ridge.value > out.value) out.value = ridge.value;
  }
  return out;
}

GridSearch miso_polar_grid(const CMatrix& h_row, const std::vector<CMatrix>& pu, double power,
                           const std::vector<double>& gamma, int steps) {
  auto f = [&](const std::vector<double>& x) {
    const CVector u = direction(x[0], x[1]);
    std::vector<double> usage;
    for (const auto& g : pu) usage.push_back((g * u).squaredNorm());
    const double t = largest_scale(power, usage, gamma);
    return std::log2(1.0 + t * (h_row * u).squaredNorm());
  };
  return grid_then_refine(f, {0.0, 0.0}, {kPi / 2, 2 * kPi}, {steps, 2 * steps});
}

GridSearch mac_scalar_grid(double g1, double g2, double e1, double e2, double mu1, double mu2, double p1_max,
                           double p2_max, double gamma, int steps) {
  const double p1_cap = e1 > 0.0 ? std::min(p1_max, gamma / e1) : p1_max;
  // x = (p1, fraction of the largest feasible p2)
  auto f = [&](const std::vector<double>& x) {
    const double p1 = x[0];
    const double p2_cap = e2 > 0.0 ? std::clamp((gamma - e1 * p1) / e2, 0.0, p2_max) : p2_max;
    const double p2 = x[1] * p2_cap;
    return mu1 * std::log2(1.0 + g1 * p1) + mu2 * std::log2(1.0 + g2 * p2 / (1.0 + g1 * p1));
  };
  return grid_then_refine(f, {0.0, 0.0}, {p1_cap, 1.0}, {steps, steps});
}

GridSearch bc_scalar_grid(double g1, double g2, double f, double mu1, double mu2, double power, double gamma,
                          int steps) {
  const double total = f > 0.0 ? std::min(power, gamma / f) : power;
  // x = (total power, share of user 2)
  auto obj = [&](const std::vector<double>& x) {
    const double p2 = x[0] * x[1];
    const double p1 = x[0] - p2;
    return mu1 * std::log2(1.0 + g1 * p1 / (1.0 + g1 * p2)) + mu2 * std::log2(1.0 + g2 * p2);
  };
  return grid_then_refine(obj, {0.0, 0.0}, {total, 1.0}, {steps, steps});
}

GridSearch bc_rank1_grid(const CVector& h1, const CVector& h2, const CMatrix& f_row, double mu1, double mu2,
                         double power, double gamma, int steps) {
  // x = (angle1, phase1, angle2, phase2, fraction of the largest feasible p2)
  auto obj = [&](const std::vector<double>& x) {
    const CVector u1 = direction(x[0], x[1]);
    const CVector u2 = direction(x[2], x[3]);
    const double c1 = (f_row * u1).squaredNorm();
    const double c2 = (f_row * u2).squaredNorm();
    const double p2_cap = c2 > 0.0 ? std::min(power, gamma / c2) : power;
    const double p2 = x[4] * p2_cap;
    double p1 = power - p2;
    if (c1 > 0.0) p1 = std::min(p1, (gamma - c2 * p2) / c1);
    p1 = std::max(0.0, p1);
    const double a11 = std::norm(h1.dot(u1));
    const double a12 = std::norm(h1.dot(u2));
    const double a22 = std::norm(h2.dot(u2));
    return mu1 * std::log2(1.0 + p1 * a11 / (1.0 + p2 * a12)) + mu2 * std::log2(1.0 + p2 * a22);
  };
  return grid_then_refine(obj, {0.0, 0.0, 0.0, 0.0, 0.0}, {kPi / 2, 2 * kPi, kPi / 2, 2 * kPi, 1.0},
                          {steps, 2 * steps, steps, 2 * steps, steps});
}

double balanced_sinr_fixed_directions(const CVector& h1, const CVector& h2, const CMatrix& f_row, double power,
                                      double gamma, const CVector& u1, const CVector& u2) {
  const double a11 = std::norm(h1.dot(u1));
  const double a22 = std::norm(h2.dot(u2));
  const double a12 = std::norm(h1.dot(u2));  // beam 2 leaking into receiver 1
  const double a21 = std::norm(h2.dot(u1));
  const double c1 = (f_row * u1).squaredNorm();
  const double c2 = (f_row * u2).squaredNorm();
  auto feasible = [&](double alpha) {
    const double det = a11 * a22 - alpha * alpha * a12 * a21;
    if (det <= 0.0) return false;
    const double p1 = alpha * (a22 + alpha * a12) / det;
    const double p2 = alpha * (a11 + alpha * a21) / det;
    return p1 + p2 <= power && c1 * p1 + c2 * p2 <= gamma;
  };
  double lo = 0.0;
  double hi = power * std::min(a11, a22);
  if (feasible(hi)) return hi;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  return lo;
}

GridSearch balance_direction_grid(const CVector& h1, const CVector& h2, const CMatrix& f_row, double power,
                                  double gamma, int steps) {
  auto obj = [&](const std::vector<double>& x) {
    return balanced_sinr_fixed_directions(h1, h2, f_row, power, gamma, direction(x[0], x[1]), direction(x[2], x[3]));
  };
  return grid_then_refine(obj, {0.0, 0.0, 0.0, 0.0}, {kPi / 2, 2 * kPi, kPi / 2, 2 * kPi},
                          {steps, 2 * steps, steps, 2 * steps});
}

bool beamformers_achieve(const std::vector<CVector>& h, const std::vector<CVector>& v, const std::vector<CMatrix>& pu,
                         double power, const std::vector<double>& gamma, double alpha, double tol) {
  double used = 0.0;
  for (const auto& b : v) used += b.squaredNorm();
  if (used > power * (1.0 + tol)) return false;
  for (std::size_t j = 0; j < pu.size(); ++j) {
    double leak = 0.0;
    for (const auto& b : v) leak += (pu[j] * b).squaredNorm();
    if (std::isfinite(gamma[j]) && leak > gamma[j] * (1.0 + tol) + 1e-12) return false;
  }
  for (std::size_t k = 0; k < h.size(); ++k) {
    double noise = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i != k) noise += std::norm(h[k].dot(v[i]));
    }
    if (std::norm(h[k].dot(v[k])) / noise < alpha * (1.0 - tol)) return false;
  }
  return true;
}

double single_user_balance_closed_form(const CVector& h, const CMatrix& f_row, double power, double gamma) {
  const double fn = f_row.norm();
  const double hn = h.norm();
  if (hn == 0.0) return 0.0;
  double x = std::sqrt(power);
  double a = hn;
  double b = 0.0;
  if (fn > 0.0) {
    const CVector fhat = f_row.adjoint() / fn;
    a = std::abs(fhat.dot(h));
    b = (h - fhat * fhat.dot(h)).norm();
    x = std::min(std::sqrt(power) * a / hn, std::sqrt(gamma) / fn);
  } else {
    x = std::sqrt(power);
  }
  const double v = a * x + b * std::sqrt(std::max(0.0, power - x * x));
  return v * v;
}

double ergodic_water_filling(const std::vector<double>& gains, double power) {
  const double n = static_cast<double>(gains.size());
  auto mean_power = [&](double level) {
    double acc = 0.0;
    for (double g : gains) {
      if (g > 0.0) acc += std::max(0.0, level - 1.0 / g);
    }
    return acc / n;
  };
  double best_gain = 0.0;
  for (double g : gains) best_gain = std::max(best_gain, g);
  if (best_gain <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = n * power + 1.0 / best_gain;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_power(mid) < power ? lo : hi) = mid;
  }
  const double level = 0.5 * (lo + hi);
  double rate = 0.0;
  for (double g : gains) {
    if (g > 0.0) rate += std::log2(1.0 + g * std::max(0.0, level - 1.0 / g));
  }
  return rate / n;
}

double fading_mac_nested_grid(const std::vector<double>& g1, const std::vector<double>& g2, double mu1, double mu2,
                              double p1_avg, double p2_avg, int multiplier_steps, int power_steps) {
  const std::size_t l_count = g1.size();
  const double ln2 = std::log(2.0);
  double top = 0.0;
  for (std::size_t l = 0; l < l_count; ++l) top = std::max({top, g1[l], g2[l]});
  const double nu_hi = (mu1 + mu2) * top / ln2;
  const double nu_lo = 1e-4 * nu_hi;

  auto state_max = [&](std::size_t l, double nu1, double nu2) {
    const double cap1 = (mu1 + mu2) / (nu1 * ln2);
    const double cap2 = (mu1 + mu2) / (nu2 * ln2);
    auto lag = [&](const std::vector<double>& p) {
      return mu1 * std::log2(1.0 + g1[l] * p[0]) + mu2 * std::log2(1.0 + g2[l] * p[1] / (1.0 + g1[l] * p[0])) -
             nu1 * p[0] - nu2 * p[1];
    };
    return grid_then_refine(lag, {0.0, 0.0}, {cap1, cap2}, {power_steps, power_steps}).value;
  };
  // x = log multipliers
  auto dual = [&](const std::vector<double>& x) {
    const double nu1 = std::exp(x[0]);
    const double nu2 = std::exp(x[1]);
    double acc = 0.0;
    for (std::size_t l = 0; l < l_count; ++l) acc += state_max(l, nu1, nu2);
    return -(acc / static_cast<double>(l_count) + nu1 * p1_avg + nu2 * p2_avg);
  };
  const double a = std::log(nu_lo);
  const double b = std::log(nu_hi);
  return -grid_then_refine(dual, {a, a}, {b, b}, {multiplier_steps, multiplier_steps}).value;
}

double ic_scalar_grid(double g11, double g22, double g21_to_1, double g12_to_2, double e1, double e2, double p1_max,
                      double p2_max, double split1, double split2, double mu1, double mu2, int steps) {
  const double c1 = e1 > 0.0 ? std::min(p1_max, split1 / e1) : p1_max;
  const double c2 = e2 > 0.0 ? std::min(p2_max, split2 / e2) : p2_max;
  double best = kNegInf;
  for (int i = 0; i < steps; ++i) {
    for (int k = 0; k < steps; ++k) {
      const double p1 = c1 * i / (steps - 1);
      const double p2 = c2 * k / (steps - 1);
      const auto r = scalar_ic_rates(g11, g22, g21_to_1, g12_to_2, p1, p2);
      best = std::max(best, mu1 * r[0] + mu2 * r[1]);
    }
  }
  return best;
}

}  // namespace crdra::oracles
