#pragma once
#include <array>

#include "bilap/grid.hpp"

namespace bilap {

/// Radial C^4 cutoff profile.  eta = 0 for r <= inner_zero_radius, ramps up over inner_ramp,
/// equals 1 on [inner_zero_radius + inner_ramp, plateau_end], ramps down over outer_ramp and
/// vanishes beyond.  inner_zero_radius = inner_ramp = 0 gives a cap bump that is 1 at r = 0.
struct BumpProfile {
  double inner_zero_radius = 0.0;
  double inner_ramp = 0.0;
  double plateau_end = 0.5;
  double outer_ramp = 0.25;

  double plateau_start() const { return inner_zero_radius + inner_ramp; }
  double support_radius() const { return plateau_end + outer_ramp; }
};

/// Quintic-through-nonic transition p(s) = s^5 (126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4);
/// p(0) = 0, p(1) = 1 and the first four derivatives vanish at both ends.
double ramp_c4(double s);
double ramp_c4_derivative(double s);

/// max over [0,1] of |d^k ramp/ds^k| for k = 1..4; k = 1 is 630/256 exactly.
std::array<double, 5> ramp_derivative_bounds();

double bump_value(const BumpProfile& p, double r);

/// Sampled radial bump about `center`.  Requires every nonzero ramp to span >= 4 grid cells
/// and the support to fit inside the grid.
ScalarField make_bump(const BumpProfile& p, const Grid2D& g, const Vec2& center);

/// Recorded gradient-bound constants: sampled max of |d^k eta / dr^k| * (ramp width)^k.
struct BumpBounds {
  std::array<double, 5> c;  // c[k] for k = 1..4 (c[0] unused)
};
BumpBounds bump_gradient_bounds(const BumpProfile& p);

}  // namespace bilap
