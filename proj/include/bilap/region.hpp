#pragma once
#include <algorithm>
#include <variant>

#include "bilap/grid.hpp"

namespace bilap {

struct Ball {
  Vec2 center;
  double radius;
};

struct Annulus {
  Vec2 center;
  double r_inner;
  double r_outer;
};

/// Axis-aligned square [lo, lo+side]^2.
struct Cube {
  Vec2 lo;
  double side;

  Vec2 hi() const { return lo + Vec2(side, side); }
  Vec2 center() const { return lo + Vec2(side / 2, side / 2); }
  double diam() const { return side * std::sqrt(2.0); }
  static Cube centered(const Vec2& c, double side) {
    return Cube{c - Vec2(side / 2, side / 2), side};
  }
};

/// Upper half ball {|p - center| <= R, p_y > center_y}; the flat part lies on y = center_y.
struct HalfBall {
  Vec2 center;
  double radius;
};

/// 1-D segment {|p_x - center_x| <= R} on the line y = center_y.
struct BoundarySegment {
  Vec2 center;
  double radius;
};

using Region = std::variant<Ball, Annulus, Cube, HalfBall, BoundarySegment>;

/// Membership is tested at node centers; closed regions with a small metric tolerance so
/// nodes that sit exactly on a radius (after snapping) are kept.
inline bool region_contains(const Region& region, const Vec2& p, double tol) {
  return std::visit(
      [&](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return (p - r.center).norm() <= r.radius + tol;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          const double d = (p - r.center).norm();
          return d >= r.r_inner - tol && d <= r.r_outer + tol;
        } else if constexpr (std::is_same_v<T, Cube>) {
          const Vec2 hi = r.hi();
          return p.x() >= r.lo.x() - tol && p.x() <= hi.x() + tol && p.y() >= r.lo.y() - tol &&
                 p.y() <= hi.y() + tol;
        } else if constexpr (std::is_same_v<T, HalfBall>) {
          return (p - r.center).norm() <= r.radius + tol && p.y() > r.center.y() + tol;
        } else {
          return std::abs(p.y() - r.center.y()) <= tol &&
                 std::abs(p.x() - r.center.x()) <= r.radius + tol;
        }
      },
      region);
}

struct IndexBox {
  int ix0, ix1, iy0, iy1;  // inclusive node ranges
  bool empty() const { return ix1 < ix0 || iy1 < iy0; }
};

inline IndexBox bounding_nodes(const Region& region, const Grid2D& g) {
  Vec2 lo, hi;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Ball>) {
          lo = r.center - Vec2(r.radius, r.radius);
          hi = r.center + Vec2(r.radius, r.radius);
        } else if constexpr (std::is_same_v<T, Annulus>) {
          lo = r.center - Vec2(r.r_outer, r.r_outer);
          hi = r.center + Vec2(r.r_outer, r.r_outer);
        } else if constexpr (std::is_same_v<T, Cube>) {
          lo = r.lo;
          hi = r.hi();
        } else if constexpr (std::is_same_v<T, HalfBall>) {
          lo = Vec2(r.center.x() - r.radius, r.center.y());
          hi = r.center + Vec2(r.radius, r.radius);
        } else {
          lo = r.center - Vec2(r.radius, 0);
          hi = r.center + Vec2(r.radius, 0);
        }
      },
      region);
  const double h = g.h();
  IndexBox b;
  b.ix0 = g.clamp_index((int)std::floor((lo.x() - g.origin.x()) / h) - 1);
  b.ix1 = g.clamp_index((int)std::ceil((hi.x() - g.origin.x()) / h) + 1);
  b.iy0 = g.clamp_index((int)std::floor((lo.y() - g.origin.y()) / h) - 1);
  b.iy1 = g.clamp_index((int)std::ceil((hi.y() - g.origin.y()) / h) + 1);
  return b;
}

inline bool is_boundary_segment(const Region& r) {
  return std::holds_alternative<BoundarySegment>(r);
}

inline std::string region_name(const Region& r) {
  switch (r.index()) {
    case 0: return "ball";
    case 1: return "annulus";
    case 2: return "cube";
    case 3: return "half-ball";
    default: return "boundary-segment";
  }
}

}  // namespace bilap
