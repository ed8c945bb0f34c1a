#include "bilap/doubling.hpp"

#include <sstream>

namespace bilap {

namespace {

Vec2 snap_center(const Grid2D& g, const Vec2& x) {
  return g.node(g.nearest_index_x(x.x()), g.nearest_index_y(x.y()));
}

double snap_radius(const Grid2D& g, double r) {
  const double h = g.h();
  long m = std::lround(r / h);
  if (m < 1) m = 1;
  return m * h;
}

void require_ball_inside(const Grid2D& g, const Vec2& c, double r) {
  if (!g.contains_ball(c, r, 1e-9 * g.h())) {
    std::ostringstream os;
    os << "ball of radius " << r << " at (" << c.x() << "," << c.y() << ") leaves the grid";
    fail(Err::RegionEmpty, os.str());
  }
}

}  // namespace

DoublingReport doubling_index(const ScalarField& u, const Vec2& x, double r) {
  const Grid2D& g = u.grid;
  DoublingReport rep;
  rep.radius_requested = r;
  rep.center = snap_center(g, x);
  rep.radius = snap_radius(g, r);
  require_ball_inside(g, rep.center, 2 * rep.radius);
  rep.sup_r = sup_norm(u, Ball{rep.center, rep.radius});
  rep.sup_2r = sup_norm(u, Ball{rep.center, 2 * rep.radius});
  if (rep.sup_r <= 0.0) fail(Err::DegenerateField, "zero sup norm on the inner ball");
  rep.index = std::log2(rep.sup_2r / rep.sup_r);
  return rep;
}

MaxDoublingReport max_doubling_index(const ScalarField& u, const Cube& q, int centers_per_axis,
                                     int radii_count) {
  if (centers_per_axis < 1 || radii_count < 1) fail(Err::BadSpec, "probe densities must be >= 1");
  MaxDoublingReport out;
  out.value = -1;
  const double diam = q.diam();
  // Geometric ladder over the sampled window [max(diam/12, 3h), diam]: ratio ~ sqrt(2) at
  // the default count of 8 rungs; doubling radii_count densifies the same window so
  // refinement checks converge.  The 3h floor keeps balls above the grid noise scale.
  const double floor_r = std::max(diam / 12.0, 3 * u.grid.h());
  bool any_nonzero = false;
  for (int jc = 0; jc < centers_per_axis; ++jc) {
    for (int ic = 0; ic < centers_per_axis; ++ic) {
      Vec2 c = q.lo;
      if (centers_per_axis > 1) {
        c += Vec2(ic * q.side / (centers_per_axis - 1), jc * q.side / (centers_per_axis - 1));
      } else {
        c = q.center();
      }
      const Vec2 cs = snap_center(u.grid, c);
      double prev_r = -1;
      for (int jr = 0; jr < radii_count; ++jr) {
        const double frac = radii_count > 1 ? (double)jr / (radii_count - 1) : 0.0;
        const double r_raw = diam * std::pow(floor_r / diam, frac);
        const double r = snap_radius(u.grid, r_raw);
        if (r == prev_r) continue;
        prev_r = r;
        if (!u.grid.contains_ball(cs, 2 * r, 1e-9 * u.grid.h())) continue;
        double s1;
        try {
          s1 = sup_norm(u, Ball{cs, r});
        } catch (const Error&) {
          continue;
        }
        if (s1 <= 0.0) continue;
        any_nonzero = true;
        const double s2 = sup_norm(u, Ball{cs, 2 * r});
        const double n = std::log2(s2 / s1);
        ++out.probes;
        if (n > out.value) {
          out.value = n;
          out.argmax_center = cs;
          out.argmax_radius = r;
        }
      }
    }
  }
  if (out.probes == 0) {
    if (!any_nonzero) fail(Err::DegenerateField, "no probe ball saw a nonzero value");
    fail(Err::RegionEmpty, "no probe ball fits the grid");
  }
  return out;
}

MonotonicityRecord check_monotonicity(const ScalarField& u, const Vec2& x, double big_r, double t,
                                      double delta, double n0) {
  if (!(t > 2.0)) fail(Err::ParameterRegime, "monotonicity check requires t > 2");
  if (!(delta > 0.0 && delta <= 0.1 + 1e-15))
    fail(Err::ParameterRegime, "delta must lie in (0, 1/10]");
  const Grid2D& g = u.grid;
  MonotonicityRecord rec;
  rec.center = snap_center(g, x);
  rec.radius = snap_radius(g, big_r);
  rec.t = t;
  rec.delta = delta;
  require_ball_inside(g, rec.center, 2 * t * rec.radius);

  const DoublingReport at_r = doubling_index(u, rec.center, rec.radius);
  const DoublingReport at_tr = doubling_index(u, rec.center, t * rec.radius);
  rec.n_at_r = at_r.index;
  rec.n_at_tr = at_tr.index;
  rec.ratio = at_tr.sup_r / at_r.sup_r;

  const double log_t_rho = std::log2(rec.ratio) / std::log2(t);
  // smallest slack C >= 0 with (1-d) N(R) + C log2(d) <= log_t(rho)
  rec.c_lo = std::max(0.0, ((1 - delta) * rec.n_at_r - log_t_rho) / std::log2(1.0 / delta));
  // smallest slack C >= 0 with log_t(rho) <= (1+d) N(tR) + C log2(1/d)
  rec.c_hi = std::max(0.0, (log_t_rho - (1 + delta) * rec.n_at_tr) / std::log2(1.0 / delta));
  const double tiny = 1e-12;
  rec.lower_plain = log_t_rho >= (1 - delta) * rec.n_at_r - tiny;
  rec.upper_plain = log_t_rho <= (1 + delta) * rec.n_at_tr + tiny;
  rec.above_n0 = rec.n_at_r >= n0;
  return rec;
}

ThreeBallRecord check_three_ball(const ScalarField& u, const Vec2& x, double big_r, double t,
                                 double delta, double eps, bool strict_scale) {
  if (!(t - 2 * delta > 2 + delta)) {
    std::ostringstream os;
    os << "three-ball geometry needs t - 2 delta > 2 + delta (t=" << t << ", delta=" << delta
       << ")";
    fail(Err::ParameterRegime, os.str());
  }
  if (!(eps > 0 && eps < 1)) fail(Err::ParameterRegime, "eps must lie in (0,1)");
  const Grid2D& g = u.grid;
  ThreeBallRecord rec;
  rec.center = snap_center(g, x);
  rec.radius = snap_radius(g, big_r);
  rec.t = t;
  rec.delta = delta;
  rec.eps = eps;
  const double R = rec.radius;
  rec.scale_condition = std::pow(t * R, eps) <= delta / 100.0;
  if (strict_scale && !rec.scale_condition) {
    std::ostringstream os;
    os << "scale condition (tR)^eps <= delta/100 fails: (" << t * R << ")^" << eps << " = "
       << std::pow(t * R, eps) << " > " << delta / 100.0;
    fail(Err::ParameterRegime, os.str());
  }
  require_ball_inside(g, rec.center, t * R);

  auto phi = [eps](double r) { return -std::log(r) + std::pow(r, eps); };
  rec.beta1 = phi((1 - 2 * delta) * R) - phi((2 + delta) * R);
  rec.beta2 = phi((2 + delta) * R) - phi((t - 2 * delta) * R);
  rec.theta = rec.beta1 / (rec.beta1 + rec.beta2);

  rec.norm_inner = l2_norm(u, Ball{rec.center, R});
  rec.norm_mid = l2_norm(u, Ball{rec.center, (2 + delta) * R});
  rec.norm_outer = l2_norm(u, Ball{rec.center, t * R});
  const double denom = std::pow(rec.norm_outer, rec.theta) * std::pow(rec.norm_inner, 1 - rec.theta);
  rec.fitted_c = denom > 0 ? rec.norm_mid / denom : 0.0;
  return rec;
}

GrowthTable check_doubling_growth(
    const std::vector<std::pair<const ScalarField*, double>>& corpus,
    const std::vector<std::string>& ids, const GrowthProbe& probe) {
  if (corpus.size() != ids.size()) fail(Err::BadSpec, "growth table needs one id per member");
  GrowthTable table;
  for (size_t i = 0; i < corpus.size(); ++i) {
    GrowthRow row;
    row.id = ids[i];
    row.m = std::max(corpus[i].second, 1.0);  // M floor so M^{1/3} is meaningful
    row.n_max =
        max_doubling_index(*corpus[i].first, probe.cube, probe.centers_per_axis, probe.radii_count)
            .value;
    row.implied_c = row.n_max / std::cbrt(row.m);
    table.fitted_c = std::max(table.fitted_c, row.implied_c);
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace bilap
