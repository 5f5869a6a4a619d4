// SPDX-License-Identifier: Apache-2.0
#include "crdra/ellipsoid.hpp"

#include "crdra/errors.hpp"

#include <cmath>

namespace crdra {

Ellipsoid::Ellipsoid(RealVector center, double radius) : center_(std::move(center)) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("Ellipsoid: radius must be positive and finite");
  const Index n = center_.size();
  shape_ = RealMatrix::Identity(n, n) * (radius * radius);
}

double Ellipsoid::width(const RealVector& g) const {
  const double q = g.dot(shape_ * g);
  return q > 0.0 ? std::sqrt(q) : 0.0;
}

bool Ellipsoid::cut(const RealVector& g, double depth) {
  const Index n = dim();
  const double w = width(g);
  if (!(w > 0.0) || !std::isfinite(w)) return false;
  double alpha = depth / w;
  if (alpha >= 1.0) return false;
  const double nd = static_cast<double>(n);
  // Shallow cuts beyond -1/n would enlarge the ellipsoid; fall back to central.
  if (alpha < -1.0 / nd) alpha = 0.0;

  const RealVector pg = shape_ * g / w;
  if (n == 1) {
    center_ -= 0.5 * (1.0 + alpha) * pg;
    shape_ *= 0.25 * (1.0 - alpha) * (1.0 - alpha);
    return true;
  }
  center_ -= (1.0 + nd * alpha) / (nd + 1.0) * pg;
  const double scale = nd * nd * (1.0 - alpha * alpha) / (nd * nd - 1.0);
  const double rank_one = 2.0 * (1.0 + nd * alpha) / ((nd + 1.0) * (1.0 + alpha));
  shape_ = scale * (shape_ - rank_one * pg * pg.transpose());
  shape_ = 0.5 * (shape_ + shape_.transpose()).eval();
  return shape_.allFinite();
}

}  // namespace crdra
