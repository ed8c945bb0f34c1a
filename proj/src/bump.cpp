#include "bilap/bump.hpp"

#include <cmath>

namespace bilap {

double ramp_c4(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double s2 = s * s;
  return s2 * s2 * s * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + s * 70.0))));
}

double ramp_c4_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  // p'(s) = 630 s^4 (1-s)^4
  const double t = s * (1.0 - s);
  return 630.0 * t * t * t * t;
}

std::array<double, 5> ramp_derivative_bounds() {
  // Dense deterministic sampling; the k = 1 bound is analytic (max at s = 1/2).
  std::array<double, 5> out{0.0, 630.0 / 256.0, 0.0, 0.0, 0.0};
  const int n = 200001;
  const double ds = 1.0 / (n - 1);
  auto p5 = [](double s, int k) {
    // k-th derivative of the nonic by direct monomial differentiation
    static const double c[10] = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
    double acc = 0;
    for (int j = 5; j <= 9; ++j) {
      double f = c[j];
      for (int m = 0; m < k; ++m) f *= (j - m);
      acc += f * std::pow(s, j - k);
    }
    return acc;
  };
  for (int k = 2; k <= 4; ++k) {
    double m = 0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(p5(i * ds, k)));
    out[k] = m;
  }
  return out;
}

double bump_value(const BumpProfile& p, double r) {
  const double up_start = p.inner_zero_radius;
  const double up_end = p.plateau_start();
  if (r < up_start) return 0.0;
  if (r < up_end) return p.inner_ramp > 0 ? ramp_c4((r - up_start) / p.inner_ramp) : 1.0;
  if (r <= p.plateau_end) return 1.0;
  if (r < p.support_radius())
    return p.outer_ramp > 0 ? ramp_c4(1.0 - (r - p.plateau_end) / p.outer_ramp) : 0.0;
  return 0.0;
}

ScalarField make_bump(const BumpProfile& p, const Grid2D& g, const Vec2& center) {
  const double h = g.h();
  if (p.inner_ramp > 0 && p.inner_ramp < 4 * h)
    fail(Err::UnderResolvedRamp, "inner ramp narrower than 4 grid cells");
  if (p.outer_ramp > 0 && p.outer_ramp < 4 * h)
    fail(Err::UnderResolvedRamp, "outer ramp narrower than 4 grid cells");
  if (p.outer_ramp <= 0 && p.plateau_end > 0)
    fail(Err::BadSpec, "bump needs a positive outer ramp");
  if (p.plateau_end <= p.plateau_start()) fail(Err::BadSpec, "bump plateau is empty");
  if (!g.contains_ball(center, p.support_radius()))
    fail(Err::BadSpec, "bump support does not fit inside the grid");
  return ScalarField::sample(
      g, [&](double x, double y) { return bump_value(p, (Vec2(x, y) - center).norm()); });
}

BumpBounds bump_gradient_bounds(const BumpProfile& p) {
  const auto rb = ramp_derivative_bounds();
  BumpBounds b{{0, 0, 0, 0, 0}};
  for (int k = 1; k <= 4; ++k) {
    double c = 0.0;
    if (p.inner_ramp > 0) c = std::max(c, rb[k]);
    if (p.outer_ramp > 0) c = std::max(c, rb[k]);
    b.c[k] = c;  // |d^k eta| <= c / (ramp width)^k on each transition
  }
  return b;
}

}  // namespace bilap
