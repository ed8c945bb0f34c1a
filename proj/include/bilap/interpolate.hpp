#pragma once
#include "bilap/grid.hpp"

namespace bilap {

/// Cubic Lagrange interpolation on a 4x4 node window, shifted inward at the edges.
/// Throws DomainExceeded for queries outside the grid rectangle (tiny tolerance).
inline double sample_bicubic(const ScalarField& f, const Vec2& p) {
  const Grid2D& g = f.grid;
  const double h = g.h();
  const double tol = 1e-9 * h;
  if (!g.contains(p, tol)) fail(Err::DomainExceeded, "interpolation query outside the grid");
  const int n = g.resolution;
  auto window = [&](double coord, double o, int& i0, double& u) {
    int cell = (int)std::floor((coord - o) / h);
    cell = std::clamp(cell, 0, n - 2);
    i0 = std::clamp(cell - 1, 0, n - 4);
    u = (coord - o) / h - i0;  // in [0,3] within the shifted window
  };
  int ix0, iy0;
  double ux, uy;
  window(p.x(), g.origin.x(), ix0, ux);
  window(p.y(), g.origin.y(), iy0, uy);
  auto lagrange = [](double u, double w[4]) {
    w[0] = -(u - 1) * (u - 2) * (u - 3) / 6.0;
    w[1] = u * (u - 2) * (u - 3) / 2.0;
    w[2] = -u * (u - 1) * (u - 3) / 2.0;
    w[3] = u * (u - 1) * (u - 2) / 6.0;
  };
  double wx[4], wy[4];
  lagrange(ux, wx);
  lagrange(uy, wy);
  double acc = 0.0;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) acc += wx[i] * wy[j] * f.values(ix0 + i, iy0 + j);
  return acc;
}

/// u_bar(x) = u(x / M^{1/4}) sampled on the source domain scaled by M^{1/4}; the potential
/// bound of the rescaled equation becomes ||W||_inf / M.  Requires M >= 1.
inline ScalarField rescale_to_unit_potential(const ScalarField& u, double m_bound) {
  if (!(m_bound >= 1.0)) fail(Err::BadSpec, "rescaling requires M >= 1");
  if (m_bound == 1.0) return u;
  const double s = std::pow(m_bound, 0.25);
  Grid2D out(u.grid.origin * s, u.grid.extent * s, u.grid.resolution);
  ScalarField r = ScalarField::zeros(out);
  for (int iy = 0; iy < out.resolution; ++iy)
    for (int ix = 0; ix < out.resolution; ++ix) {
      Vec2 q = out.node(ix, iy) / s;
      // guard fl rounding at the far corner
      q = q.cwiseMax(u.grid.origin).cwiseMin(u.grid.max_corner());
      r.values(ix, iy) = sample_bicubic(u, q);
    }
  return r;
}

/// W_bar(x) = W(x / M^{1/4}) / M, the potential matching rescale_to_unit_potential.
inline ScalarField rescale_potential(const ScalarField& w, double m_bound) {
  ScalarField r = rescale_to_unit_potential(w, m_bound);
  r.values /= m_bound;
  return r;
}

/// Resample onto an arbitrary grid; queries outside the source raise DomainExceeded.
inline ScalarField resample(const ScalarField& u, const Grid2D& target) {
  ScalarField r = ScalarField::zeros(target);
  for (int iy = 0; iy < target.resolution; ++iy)
    for (int ix = 0; ix < target.resolution; ++ix)
      r.values(ix, iy) = sample_bicubic(u, target.node(ix, iy));
  return r;
}

}  // namespace bilap
