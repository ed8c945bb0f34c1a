#include "bilap/nodal.hpp"

#include <algorithm>
#include <cmath>

namespace bilap {

namespace {

struct CellCorner {
  double v;     // perturbed value
  Vec2 p;
};

// Linear zero crossing between two corners of opposite sign.
Vec2 crossing(const CellCorner& a, const CellCorner& b) {
  const double t = a.v / (a.v - b.v);
  return a.p + t * (b.p - a.p);
}

bool rides_boundary(const NodalSegment& s, const Cube& q, double band) {
  const Vec2 hi = q.hi();
  auto near_side = [&](double coord_a, double coord_b, double side) {
    return std::abs(coord_a - side) <= band && std::abs(coord_b - side) <= band;
  };
  return near_side(s.a.x(), s.b.x(), q.lo.x()) || near_side(s.a.x(), s.b.x(), hi.x()) ||
         near_side(s.a.y(), s.b.y(), q.lo.y()) || near_side(s.a.y(), s.b.y(), hi.y());
}

}  // namespace

NodalSet extract_nodal_set(const ScalarField& u, const Cube& q) {
  const Grid2D& g = u.grid;
  const double h = g.h();
  const double tol = 1e-6 * h;
  NodalSet out;
  out.source = q;

  const int ix0 = g.clamp_index((int)std::ceil((q.lo.x() - g.origin.x()) / h - tol));
  const int iy0 = g.clamp_index((int)std::ceil((q.lo.y() - g.origin.y()) / h - tol));
  const int ix1 = g.clamp_index((int)std::floor((q.hi().x() - g.origin.x()) / h + tol));
  const int iy1 = g.clamp_index((int)std::floor((q.hi().y() - g.origin.y()) / h + tol));
  if (ix1 <= ix0 || iy1 <= iy0) fail(Err::RegionEmpty, "cube covers no grid cell");

  double sup = 0.0;
  for (int iy = iy0; iy <= iy1; ++iy)
    for (int ix = ix0; ix <= ix1; ++ix) sup = std::max(sup, std::abs(u.values(ix, iy)));
  if (sup == 0.0) fail(Err::DegenerateField, "field vanishes identically on the cube");
  const double nudge = 1e-12 * sup;  // deterministic tie-break for exact node zeros
  auto val = [&](int ix, int iy) {
    const double v = u.values(ix, iy);
    return v == 0.0 ? nudge : v;
  };

  const double band = 1e-9 * q.side;
  for (int iy = iy0; iy < iy1; ++iy) {
    for (int ix = ix0; ix < ix1; ++ix) {
      // corners counterclockwise from lower-left
      CellCorner c00{val(ix, iy), g.node(ix, iy)};
      CellCorner c10{val(ix + 1, iy), g.node(ix + 1, iy)};
      CellCorner c11{val(ix + 1, iy + 1), g.node(ix + 1, iy + 1)};
      CellCorner c01{val(ix, iy + 1), g.node(ix, iy + 1)};
      const int code = (c00.v > 0 ? 1 : 0) | (c10.v > 0 ? 2 : 0) | (c11.v > 0 ? 4 : 0) |
                       (c01.v > 0 ? 8 : 0);
      if (code == 0 || code == 15) continue;

      auto bottom = [&] { return crossing(c00, c10); };
      auto right = [&] { return crossing(c10, c11); };
      auto top = [&] { return crossing(c01, c11); };
      auto left = [&] { return crossing(c00, c01); };
      auto emit = [&](const Vec2& a, const Vec2& b) {
        NodalSegment s{a, b};
        if (s.length() == 0.0) return;
        if (rides_boundary(s, q, band)) return;  // open-cube convention
        out.segments.push_back(s);
      };

      switch (code) {
        case 1: case 14: emit(bottom(), left()); break;
        case 2: case 13: emit(bottom(), right()); break;
        case 4: case 11: emit(right(), top()); break;
        case 8: case 7: emit(left(), top()); break;
        case 3: case 12: emit(left(), right()); break;
        case 6: case 9: emit(bottom(), top()); break;
        case 5: case 10: {
          // saddle: the center region takes the sign of the cell average; branches hug the
          // corners whose sign differs from it (sign-symmetric, so u and -u agree)
          const double avg = 0.25 * (c00.v + c10.v + c11.v + c01.v);
          const bool center_pos = avg >= 0.0;
          if ((code == 5 && center_pos) || (code == 10 && !center_pos)) {
            emit(bottom(), right());  // around c10
            emit(left(), top());      // around c01
          } else {
            emit(bottom(), left());   // around c00
            emit(right(), top());     // around c11
          }
          break;
        }
        default: break;
      }
    }
  }
  double len = 0.0;
  for (const auto& s : out.segments) len += s.length();
  out.total_length = len;
  return out;
}

double hausdorff_length(const NodalSet& s) {
  double len = 0.0;
  for (const auto& seg : s.segments) len += seg.length();
  return len;
}

std::vector<Cube> partition(const Cube& q, int per_axis) {
  if (per_axis < 2) fail(Err::BadSpec, "partition needs per_axis >= 2");
  const double side = q.side / per_axis;
  std::vector<Cube> cubes;
  cubes.reserve((size_t)per_axis * per_axis);
  for (int j = 0; j < per_axis; ++j)
    for (int i = 0; i < per_axis; ++i)
      cubes.push_back(Cube{q.lo + Vec2(i * side, j * side), side});
  return cubes;
}

PartitionReport hyperplane_lemma_check(const ScalarField& u, const Cube& q, int a_half,
                                       double n_bound, double n0_gate,
                                       const SubcubeProbe& probe) {
  if (a_half < 1) fail(Err::BadSpec, "hyperplane check needs A >= 1");
  const int per = 2 * a_half + 1;
  PartitionReport rep;
  rep.cube = q;
  rep.per_axis = per;
  rep.n_of_q = max_doubling_index(u, q, 5, 6).value;
  if (n_bound < 0) n_bound = rep.n_of_q;  // run against the measured N(Q)
  rep.n_bound = n_bound;
  rep.gated = n_bound <= n0_gate;
  rep.precondition_ok = rep.n_of_q <= n_bound + 1e-9;
  const auto cubes = partition(q, per);
  // row j = a_half meets the horizontal center line of q
  rep.min_row_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < per; ++i) {
    const Cube& sub = cubes[(size_t)a_half * per + i];
    SubcubeIndexRow row;
    row.cube = sub;
    row.i = i;
    row.j = a_half;
    row.n_value = max_doubling_index(u, sub, probe.centers_per_axis, probe.radii_count).value;
    rep.min_row_value = std::min(rep.min_row_value, row.n_value);
    rep.rows.push_back(row);
  }
  rep.threshold = n_bound / 2.0;
  rep.pass = rep.gated || rep.min_row_value <= rep.threshold + 1e-9;
  return rep;
}

PartitionReport bad_cube_count(const ScalarField& u, const Cube& q, int a, double n0, double c,
                               const SubcubeProbe& probe) {
  if (a < 2) fail(Err::BadSpec, "bad-cube count needs A >= 2");
  PartitionReport rep;
  rep.cube = q;
  rep.per_axis = a;
  rep.n_of_q = max_doubling_index(u, q, 5, 6).value;
  rep.n_bound = rep.n_of_q;
  rep.threshold = std::max(rep.n_of_q / (1.0 + c), n0);
  const auto cubes = partition(q, a);
  for (int j = 0; j < a; ++j) {
    for (int i = 0; i < a; ++i) {
      const Cube& sub = cubes[(size_t)j * a + i];
      SubcubeIndexRow row;
      row.cube = sub;
      row.i = i;
      row.j = j;
      row.n_value = max_doubling_index(u, sub, probe.centers_per_axis, probe.radii_count).value;
      row.above_threshold = row.n_value > rep.threshold;
      if (row.above_threshold) ++rep.count_above;
      rep.rows.push_back(row);
    }
  }
  rep.pass = rep.count_above <= a / 2.0;
  return rep;
}

double nodal_bound_recursion(double n, double n0, double a, double c, double f_n0) {
  if (!(n0 > 0) || !(c > 0) || !(a >= 2)) fail(Err::BadSpec, "recursion needs N0 > 0, c > 0, A >= 2");
  if (n < n0) return f_n0;
  const double alpha0 = std::log(2 * a) / std::log(1 + c);
  return std::pow(n / n0, alpha0) * f_n0;
}

double nodal_bound_recursion_loop(double n, double n0, double a, double c, double f_n0) {
  if (!(n0 > 0) || !(c > 0) || !(a >= 2)) fail(Err::BadSpec, "recursion needs N0 > 0, c > 0, A >= 2");
  double f = f_n0;
  int k = 0;
  const int k_max = (int)std::ceil(std::log(std::max(n / n0, 1.0)) / std::log(1 + c) - 1e-12);
  for (; k < k_max; ++k) f *= 2 * a;
  return f;
}

BoundLedger assemble_global_bound(double m, double a, double c, double cover_constant, double n0,
                                  double f_n0) {
  if (!(m >= 1)) fail(Err::BadSpec, "global bound needs M >= 1");
  BoundLedger lg;
  lg.m = m;
  lg.a = a;
  lg.c = c;
  lg.n0 = n0;
  lg.f_n0 = f_n0;
  lg.cover_constant = cover_constant;
  lg.alpha0 = std::log(2 * a) / std::log(1 + c);
  lg.beta = lg.alpha0 / 3.0 + 0.25;
  lg.bound = cover_constant * std::pow(m, lg.beta);
  return lg;
}

SlopeFit scaling_exponent_fit(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() < 3) fail(Err::FitDegenerate, "slope fit needs at least 3 measurements");
  double m_min = std::numeric_limits<double>::infinity(), m_max = 0;
  for (const auto& [m, len] : pts) {
    if (!(m > 0) || !(len > 0)) fail(Err::FitDegenerate, "slope fit needs positive M and length");
    m_min = std::min(m_min, m);
    m_max = std::max(m_max, m);
  }
  if (m_max / m_min < 10.0) fail(Err::FitDegenerate, "M values must span at least one decade");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = (double)pts.size();
  for (const auto& [m, len] : pts) {
    const double x = std::log(m), y = std::log(len);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit fit;
  const double var = sxx - sx * sx / n;
  if (var <= 0) fail(Err::FitDegenerate, "no spread in log M");
  fit.slope = (sxy - sx * sy / n) / var;
  fit.intercept = (sy - fit.slope * sx) / n;
  for (const auto& [m, len] : pts) {
    const double r = std::log(len) - (fit.intercept + fit.slope * std::log(m));
    fit.max_residual = std::max(fit.max_residual, std::abs(r));
  }
  return fit;
}

}  // namespace bilap
