// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "crdra/types.hpp"

namespace crdra {

/// Linear inequality normal^T x <= offset.
struct HalfSpace {
  RealVector normal;
  double offset = 0.0;
};

/// Ellipsoid {x : (x - c)^T P^{-1} (x - c) <= 1} with deep-cut updates.
///
/// In one dimension the update degenerates to interval bisection.
class Ellipsoid {
 public:
  Ellipsoid(RealVector center, double radius);

  const RealVector& center() const { return center_; }
  const RealMatrix& shape() const { return shape_; }
  Index dim() const { return center_.size(); }

  /// sqrt(g^T P g): half-width of the ellipsoid along g.
  double width(const RealVector& g) const;

  /// Restricts to {x : g^T (x - c) <= -depth}. Returns false when the cut
  /// leaves nothing (depth >= width) or the shape matrix has degenerated.
  bool cut(const RealVector& g, double depth = 0.0);

 private:
  RealVector center_;
  RealMatrix shape_;
};

}  // namespace crdra
