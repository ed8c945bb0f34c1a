#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "bilap/errors.hpp"

namespace bilap {

using Vec2 = Eigen::Vector2d;

/// Uniform square grid. Node (i, j) sits at origin + (i h, j h), 0 <= i, j < resolution.
/// Resolution is odd so the center of the domain is a node; spacing is equal in both axes.
struct Grid2D {
  Vec2 origin{-1.0, -1.0};
  double extent = 2.0;
  int resolution = 129;

  Grid2D() = default;
  Grid2D(const Vec2& origin_, double extent_, int resolution_)
      : origin(origin_), extent(extent_), resolution(resolution_) {
    validate();
  }

  static Grid2D centered(const Vec2& c, double extent, int resolution) {
    return Grid2D(c - Vec2(extent / 2, extent / 2), extent, resolution);
  }

  void validate() const {
    if (resolution < 3) fail(Err::BadSpec, "grid resolution must be >= 3");
    if (resolution % 2 == 0) fail(Err::BadSpec, "grid resolution must be odd");
    if (!(extent > 0) || !std::isfinite(extent)) fail(Err::BadSpec, "grid extent must be positive");
  }

  double h() const { return extent / (resolution - 1); }
  Vec2 node(int ix, int iy) const { return origin + h() * Vec2(ix, iy); }
  Vec2 center() const { return origin + Vec2(extent / 2, extent / 2); }
  Vec2 max_corner() const { return origin + Vec2(extent, extent); }

  bool contains(const Vec2& p, double tol = 0.0) const {
    const Vec2 hi = max_corner();
    return p.x() >= origin.x() - tol && p.x() <= hi.x() + tol && p.y() >= origin.y() - tol &&
           p.y() <= hi.y() + tol;
  }

  /// Ball B_r(c) fits inside the grid rectangle.
  bool contains_ball(const Vec2& c, double r, double tol = 0.0) const {
    const Vec2 hi = max_corner();
    return c.x() - r >= origin.x() - tol && c.x() + r <= hi.x() + tol &&
           c.y() - r >= origin.y() - tol && c.y() + r <= hi.y() + tol;
  }

  int clamp_index(int i) const { return i < 0 ? 0 : (i >= resolution ? resolution - 1 : i); }
  int floor_index_x(double x) const { return clamp_index((int)std::floor((x - origin.x()) / h())); }
  int floor_index_y(double y) const { return clamp_index((int)std::floor((y - origin.y()) / h())); }
  int nearest_index_x(double x) const { return clamp_index((int)std::lround((x - origin.x()) / h())); }
  int nearest_index_y(double y) const { return clamp_index((int)std::lround((y - origin.y()) / h())); }

  bool same(const Grid2D& o) const {
    return resolution == o.resolution && std::abs(extent - o.extent) <= 1e-14 * extent &&
           (origin - o.origin).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + extent);
  }
};

/// Real-valued samples on a Grid2D; values(ix, iy). Immutable by convention after construction.
/// invalid_margin marks how many outer node rings carry meaningless values (set by the
/// finite-difference operators); norms refuse regions that reach into that ring.
struct ScalarField {
  Grid2D grid;
  Eigen::ArrayXXd values;
  int invalid_margin = 0;

  static ScalarField zeros(const Grid2D& g) {
    g.validate();
    ScalarField f;
    f.grid = g;
    f.values = Eigen::ArrayXXd::Zero(g.resolution, g.resolution);
    return f;
  }

  static ScalarField sample(const Grid2D& g, const std::function<double(double, double)>& fn) {
    ScalarField f = zeros(g);
    const double h = g.h();
    for (int iy = 0; iy < g.resolution; ++iy) {
      const double y = g.origin.y() + iy * h;
      for (int ix = 0; ix < g.resolution; ++ix) {
        f.values(ix, iy) = fn(g.origin.x() + ix * h, y);
      }
    }
    if (!f.values.allFinite()) fail(Err::BadSpec, "sampled field has non-finite values");
    return f;
  }

  double at(int ix, int iy) const { return values(ix, iy); }
  double max_abs() const { return values.abs().maxCoeff(); }
  int n() const { return grid.resolution; }
};

}  // namespace bilap
