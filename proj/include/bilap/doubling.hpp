#pragma once
#include <optional>
#include <vector>

#include "bilap/norms.hpp"

namespace bilap {

/// N(x, r) = log2( sup_{B_2r(x)} |u| / sup_{B_r(x)} |u| ).  Center and radius snap to the
/// grid (nearest node, nearest positive multiple of h) so that homogeneous fields give the
/// exact index; both requested and snapped values are recorded.
struct DoublingReport {
  Vec2 center;
  double radius_requested = 0;
  double radius = 0;
  double sup_r = 0;
  double sup_2r = 0;
  double index = 0;
};

DoublingReport doubling_index(const ScalarField& u, const Vec2& x, double r);

struct MaxDoublingReport {
  double value = 0;
  Vec2 argmax_center{0, 0};
  double argmax_radius = 0;
  int probes = 0;  // probes whose balls fit the domain and had nonzero inner sup
};

/// Max of N(x, r) over a centers_per_axis^2 subgrid of Q and a geometric radius ladder
/// r = diam(Q) / sqrt(2)^j, j = 0..radii_count-1; probes whose B_2r leaves the grid are
/// skipped.  Degenerate (identically zero on all probes) raises DegenerateField.
MaxDoublingReport max_doubling_index(const ScalarField& u, const Cube& q, int centers_per_axis,
                                     int radii_count);

/// Two-sided almost-monotonicity margins for the ratio rho = sup_{tR} / sup_R, t > 2:
///   lower: rho >= t^{(1-delta) N(x,R) + C log2(delta)}   (slack exponent C = c_lo)
///   upper: rho <= t^{(1+delta) N(x,tR) + C log2(1/delta)} (slack exponent C = c_hi)
/// c_lo / c_hi are the smallest slacks making each side hold; the slack-free forms are
/// reported as plain flags, gated by the caller's N0.
struct MonotonicityRecord {
  Vec2 center;
  double radius = 0;  // snapped R
  double t = 0;
  double delta = 0;
  double n_at_r = 0;
  double n_at_tr = 0;
  double ratio = 0;
  double c_lo = 0;
  double c_hi = 0;
  bool lower_plain = false;  // rho >= t^{(1-delta) N(x,R)}
  bool upper_plain = false;  // rho <= t^{(1+delta) N(x,tR)}
  bool above_n0 = false;     // N(x,R) >= caller's N0, where the plain form is expected
};

MonotonicityRecord check_monotonicity(const ScalarField& u, const Vec2& x, double big_r, double t,
                                      double delta, double n0);

/// Three-ball interpolation || u ||_{(2+d)R} <= C || u ||_{tR}^theta || u ||_R^{1-theta} in L2,
/// theta = beta1 / (beta1 + beta2) from phi(r) = -ln r + r^eps.  The scale condition
/// (tR)^eps <= delta/100 is recorded as a flag (it is unreachable at desk scale); strict mode
/// turns its violation into a ParameterRegime error.
struct ThreeBallRecord {
  Vec2 center;
  double radius = 0;
  double t = 0, delta = 0, eps = 0;
  double norm_inner = 0, norm_mid = 0, norm_outer = 0;  // at R, (2+d)R, tR
  double beta1 = 0, beta2 = 0;
  double theta = 0;
  double fitted_c = 0;
  bool scale_condition = false;
};

ThreeBallRecord check_three_ball(const ScalarField& u, const Vec2& x, double big_r, double t,
                                 double delta, double eps, bool strict_scale = false);

/// Doubling growth over a corpus: per member the max probed N, against C * max(M,1)^{1/3}.
struct GrowthRow {
  std::string id;
  double m = 0;       // floored at 1
  double n_max = 0;
  double implied_c = 0;  // n_max / m^{1/3}
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double fitted_c = 0;  // max implied_c
};

struct GrowthProbe {
  Cube cube = Cube::centered(Vec2(0, 0), 1.0);
  int centers_per_axis = 5;
  int radii_count = 6;
};

GrowthTable check_doubling_growth(
    const std::vector<std::pair<const ScalarField*, double>>& corpus,
    const std::vector<std::string>& ids, const GrowthProbe& probe);

}  // namespace bilap
