#include "bilap/simplex.hpp"

#include <cmath>

namespace bilap {

SimplexGeometry simplex_metrics(const Vec2& x1, const Vec2& x2, const Vec2& x3) {
  SimplexGeometry s;
  s.vertices = {x1, x2, x3};
  s.barycenter = (x1 + x2 + x3) / 3.0;
  const double d12 = (x1 - x2).norm(), d13 = (x1 - x3).norm(), d23 = (x2 - x3).norm();
  s.diam = std::max({d12, d13, d23});
  // width of a triangle = min altitude = 2 area / longest edge; take the min over edges to
  // cover degenerate ties
  const double area2 = std::abs((x2 - x1).x() * (x3 - x1).y() - (x2 - x1).y() * (x3 - x1).x());
  double w = std::numeric_limits<double>::infinity();
  for (double e : {d12, d13, d23})
    if (e > 0) w = std::min(w, area2 / e);
  s.width = std::isfinite(w) ? w : 0.0;
  s.relative_width = s.diam > 0 ? s.width / s.diam : 0.0;
  return s;
}

namespace {

double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

// Concentric square-to-disk map (Shirley-Chiu); area preserving, deterministic.
Vec2 disk_point(int index, const Vec2& center, double radius) {
  const double u = 2.0 * halton(index + 1, 2) - 1.0;
  const double v = 2.0 * halton(index + 1, 3) - 1.0;
  double r = 0.0, theta = 0.0;
  if (u != 0.0 || v != 0.0) {
    if (std::abs(u) > std::abs(v)) {
      r = u;
      theta = (M_PI / 4.0) * (v / u);
    } else {
      r = v;
      theta = M_PI / 2.0 - (M_PI / 4.0) * (u / v);
    }
  }
  return center + radius * r * Vec2(std::cos(theta), std::sin(theta));
}

}  // namespace

CoveringCheck simplex_covering_check(const SimplexGeometry& s, double big_k, double tau_hat,
                                     int samples, double t_second) {
  CoveringCheck out;
  out.samples = samples;
  const double rho = big_k * s.diam;
  const double outer = rho * (1.0 + tau_hat);
  const double tol = 1e-12 * (1.0 + rho);
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Vec2 y = disk_point(i, s.barycenter, outer);
    double dmin = std::numeric_limits<double>::infinity();
    for (const Vec2& v : s.vertices) dmin = std::min(dmin, (y - v).norm());
    const double excess = (dmin - rho) / std::max(s.diam, 1e-300);
    out.worst_excess = std::max(out.worst_excess, excess);
    if (dmin > rho + tol) {
      if (out.failures == 0) out.first_failure = y;
      ++out.failures;
    }
  }
  out.pass = out.failures == 0;

  // companion fact: B_{rho t}(x_i) subset of B_{rho t (1 + c1/t)}(x0), c1 = 1/K
  const double c1 = 1.0 / big_k;
  const double rt = rho * t_second;
  const double cover = rt * (1.0 + c1 / t_second);
  out.second_fact_pass = true;
  const int per_vertex = std::max(samples / 8, 64);
  for (const Vec2& v : s.vertices) {
    for (int i = 0; i < per_vertex; ++i) {
      const Vec2 y = disk_point(i, v, rt);
      if ((y - s.barycenter).norm() > cover + tol) {
        out.second_fact_pass = false;
        break;
      }
    }
    if (!out.second_fact_pass) break;
  }
  return out;
}

SimplexLemmaReport simplex_lemma_check(const ScalarField& u, const SimplexGeometry& s,
                                       double gamma, const SimplexLemmaParams& params) {
  SimplexLemmaReport rep;
  if (!(s.relative_width > gamma)) {
    rep.verdict = SimplexVerdict::Skipped;
    rep.reason = "relative width w(S) below gamma";
    return rep;
  }
  const double ri = params.big_k * s.diam / 2.0;
  double nmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    try {
      rep.vertex_index[i] = doubling_index(u, s.vertices[i], ri).index;
    } catch (const Error& e) {
      rep.verdict = SimplexVerdict::Skipped;
      rep.reason = std::string("vertex ball probe failed: ") + e.what();
      return rep;
    }
    nmin = std::min(nmin, rep.vertex_index[i]);
  }
  rep.n = nmin;
  if (!(rep.n > params.n0)) {
    rep.verdict = SimplexVerdict::Skipped;
    rep.reason = "vertex doubling index below N0";
    return rep;
  }
  try {
    rep.barycenter_index = doubling_index(u, s.barycenter, params.big_c * s.diam).index;
  } catch (const Error& e) {
    rep.verdict = SimplexVerdict::Skipped;
    rep.reason = std::string("barycenter ball probe failed: ") + e.what();
    return rep;
  }
  rep.required = (1.0 + params.c) * rep.n;
  rep.margin = rep.barycenter_index - rep.required;
  const double vacuous_tol = 0.05 * rep.n;
  if (rep.margin > 0) {
    rep.verdict = SimplexVerdict::Pass;
  } else if (rep.margin > -params.c * rep.n - vacuous_tol &&
             std::abs(rep.barycenter_index - rep.n) <= vacuous_tol) {
    // homogeneous saturation: barycenter index equals the vertex index, no strict gain
    rep.verdict = SimplexVerdict::VacuousMargin;
    rep.reason = "indices saturate (homogeneous-type field), no strict gain";
  } else {
    rep.verdict = SimplexVerdict::Fail;
  }
  return rep;
}

}  // namespace bilap
