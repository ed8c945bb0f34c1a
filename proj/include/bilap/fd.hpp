#pragma once
#include <array>

#include "bilap/grid.hpp"

namespace bilap {

struct MultiIndex {
  int dx = 0;
  int dy = 0;
  int order() const { return dx + dy; }
};

namespace detail {

// O(h^2) central stencils, order m derivative along one axis.  reach = nodes used on each side.
struct Stencil {
  int reach;
  std::array<double, 5> w;
};

inline Stencil axis_stencil(int m) {
  switch (m) {
    case 1: return {1, {-0.5, 0.0, 0.5, 0.0, 0.0}};
    case 2: return {1, {1.0, -2.0, 1.0, 0.0, 0.0}};
    case 3: return {2, {-0.5, 1.0, 0.0, -1.0, 0.5}};
    case 4: return {2, {1.0, -4.0, 6.0, -4.0, 1.0}};
    default: fail(Err::UnsupportedOrder, "axis derivative order must be in [1,4]");
  }
}

inline void apply_axis(const Eigen::ArrayXXd& in, Eigen::ArrayXXd& out, int axis, int m, double h) {
  const Stencil s = axis_stencil(m);
  const double scale = 1.0 / std::pow(h, m);
  const int n = (int)in.rows();
  out.setZero(n, n);
  const int r = s.reach;
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int i = axis == 0 ? ix : iy;
      if (i < r || i >= n - r) continue;
      double acc = 0;
      for (int k = -r; k <= r; ++k) {
        const double w = s.w[k + r];
        if (w == 0.0) continue;
        acc += w * (axis == 0 ? in(ix + k, iy) : in(ix, iy + k));
      }
      out(ix, iy) = acc * scale;
    }
  }
}

}  // namespace detail

/// Central finite-difference partial derivative, O(h^2).  The result's invalid_margin is
/// |alpha| nodes: consumers must keep regions that far from the grid boundary.
inline ScalarField derivative(const ScalarField& f, MultiIndex alpha) {
  if (alpha.order() > 4 || alpha.dx < 0 || alpha.dy < 0)
    fail(Err::UnsupportedOrder, "derivative order |alpha| must be <= 4");
  if (f.grid.resolution < alpha.order() + 3)
    fail(Err::BadSpec, "field resolution too small for requested derivative");
  ScalarField out = f;
  Eigen::ArrayXXd tmp;
  if (alpha.dx > 0) {
    detail::apply_axis(out.values, tmp, 0, alpha.dx, f.grid.h());
    out.values.swap(tmp);
  }
  if (alpha.dy > 0) {
    detail::apply_axis(out.values, tmp, 1, alpha.dy, f.grid.h());
    out.values.swap(tmp);
  }
  out.invalid_margin = std::max(f.invalid_margin, 0) + alpha.order();
  return out;
}

/// Compact 5-point Laplacian, the stencil the BVP solver uses.  Margin grows by one node.
inline ScalarField laplacian5(const ScalarField& f) {
  const int n = f.n();
  const double h2 = f.grid.h() * f.grid.h();
  ScalarField out = ScalarField::zeros(f.grid);
  for (int iy = 1; iy < n - 1; ++iy)
    for (int ix = 1; ix < n - 1; ++ix)
      out.values(ix, iy) = (f.values(ix + 1, iy) + f.values(ix - 1, iy) + f.values(ix, iy + 1) +
                            f.values(ix, iy - 1) - 4.0 * f.values(ix, iy)) /
                           h2;
  out.invalid_margin = f.invalid_margin + 1;
  return out;
}

inline ScalarField bilaplacian5(const ScalarField& f) { return laplacian5(laplacian5(f)); }

/// Pointwise |grad f| from the order-1 central differences.
inline ScalarField gradient_magnitude(const ScalarField& f) {
  ScalarField fx = derivative(f, {1, 0});
  ScalarField fy = derivative(f, {0, 1});
  ScalarField out = fx;
  out.values = (fx.values.square() + fy.values.square()).sqrt();
  out.invalid_margin = std::max(fx.invalid_margin, fy.invalid_margin);
  return out;
}

/// Frobenius magnitude of the Hessian.
inline ScalarField hessian_magnitude(const ScalarField& f) {
  ScalarField fxx = derivative(f, {2, 0});
  ScalarField fyy = derivative(f, {0, 2});
  ScalarField fxy = derivative(f, {1, 1});
  ScalarField out = fxx;
  out.values = (fxx.values.square() + 2.0 * fxy.values.square() + fyy.values.square()).sqrt();
  out.invalid_margin = std::max({fxx.invalid_margin, fyy.invalid_margin, fxy.invalid_margin});
  return out;
}

/// Euclidean magnitude of all order-k partials (k = 0..4), used by the Caccioppoli checks.
inline ScalarField derivative_magnitude(const ScalarField& f, int k) {
  if (k == 0) {
    ScalarField out = f;
    out.values = f.values.abs();
    return out;
  }
  ScalarField out = ScalarField::zeros(f.grid);
  Eigen::ArrayXXd acc = Eigen::ArrayXXd::Zero(f.n(), f.n());
  int margin = 0;
  for (int dx = 0; dx <= k; ++dx) {
    ScalarField d = derivative(f, {dx, k - dx});
    acc += d.values.square();
    margin = std::max(margin, d.invalid_margin);
  }
  out.values = acc.sqrt();
  out.invalid_margin = margin;
  return out;
}

}  // namespace bilap
