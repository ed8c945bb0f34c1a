#include "bilap/norms.hpp"

#include <sstream>

#include "bilap/fd.hpp"

namespace bilap {

namespace {

double membership_tol(const Grid2D& g) { return 1e-6 * g.h(); }

void check_margin(const ScalarField& f, int ix, int iy) {
  const int m = f.invalid_margin;
  if (m == 0) return;
  const int n = f.grid.resolution;
  if (ix < m || iy < m || ix >= n - m || iy >= n - m) {
    std::ostringstream os;
    os << "region reaches node (" << ix << "," << iy << ") inside the " << m
       << "-node invalid derivative margin";
    fail(Err::BoundaryMargin, os.str());
  }
}

template <class Fn>
int visit_region_nodes(const ScalarField& f, const Region& region, Fn&& fn) {
  const Grid2D& g = f.grid;
  const double tol = membership_tol(g);
  const IndexBox box = bounding_nodes(region, g);
  int count = 0;
  for (int iy = box.iy0; iy <= box.iy1; ++iy) {
    for (int ix = box.ix0; ix <= box.ix1; ++ix) {
      if (!region_contains(region, g.node(ix, iy), tol)) continue;
      check_margin(f, ix, iy);
      fn(ix, iy);
      ++count;
    }
  }
  return count;
}

}  // namespace

int node_count(const ScalarField& f, const Region& region) {
  return visit_region_nodes(f, region, [](int, int) {});
}

double sup_norm(const ScalarField& f, const Region& region) {
  double m = 0.0;
  const int count = visit_region_nodes(f, region, [&](int ix, int iy) {
    m = std::max(m, std::abs(f.values(ix, iy)));
  });
  if (count == 0) fail(Err::RegionEmpty, "region " + region_name(region) + " contains no grid node");
  return m;
}

double l2_norm(const ScalarField& f, const Region& region) {
  const double h = f.grid.h();
  if (is_boundary_segment(region)) {
    // 1-D trapezoid along the row: half weight at the first and last node found.
    std::vector<double> vals;
    visit_region_nodes(f, region, [&](int ix, int iy) { vals.push_back(f.values(ix, iy)); });
    if (vals.empty())
      fail(Err::RegionEmpty, "boundary segment contains no grid node");
    double acc = 0.0;
    for (size_t i = 0; i < vals.size(); ++i) {
      const double w = (i == 0 || i + 1 == vals.size()) ? 0.5 : 1.0;
      acc += w * vals[i] * vals[i] * h;
    }
    return std::sqrt(acc);
  }
  double acc = 0.0;
  const int count = visit_region_nodes(f, region, [&](int ix, int iy) {
    const double v = f.values(ix, iy);
    acc += v * v;
  });
  if (count == 0) fail(Err::RegionEmpty, "region " + region_name(region) + " contains no grid node");
  return std::sqrt(acc * h * h);
}

double weighted_l2(const ScalarField& f, const std::function<double(const Vec2&)>& weight,
                   int radial_power, const Vec2& center, const Region& region) {
  const Grid2D& g = f.grid;
  const double h = g.h();
  auto term = [&](int ix, int iy) {
    const Vec2 p = g.node(ix, iy);
    const double w = weight(p);
    if (!std::isfinite(w)) {
      std::ostringstream os;
      os << "weight not finite at node (" << ix << "," << iy << ") = (" << p.x() << "," << p.y()
         << ")";
      fail(Err::SingularWeight, os.str());
    }
    const double r = (p - center).norm();
    const double rp = radial_power == 0 ? 1.0 : std::pow(r, radial_power);
    const double t = w * rp * f.values(ix, iy);
    return t * t;
  };
  double acc = 0.0;
  int count = 0;
  if (is_boundary_segment(region)) {
    // 1-D trapezoid along the row, matching l2_norm
    std::vector<double> vals;
    visit_region_nodes(f, region, [&](int ix, int iy) { vals.push_back(term(ix, iy)); });
    count = (int)vals.size();
    for (size_t i = 0; i < vals.size(); ++i)
      acc += ((i == 0 || i + 1 == vals.size()) ? 0.5 : 1.0) * vals[i] * h;
  } else {
    count = visit_region_nodes(f, region, [&](int ix, int iy) { acc += term(ix, iy); });
    acc *= h * h;
  }
  if (count == 0) fail(Err::RegionEmpty, "region " + region_name(region) + " contains no grid node");
  if (!std::isfinite(acc)) fail(Err::SingularWeight, "weighted sum overflowed");
  return std::sqrt(acc);
}

double trace_sobolev_norm(const ScalarField& f, const BoundarySegment& seg, int normal_order,
                          int sobolev_order) {
  if (normal_order + sobolev_order > 4)
    fail(Err::UnsupportedOrder, "trace norm needs derivative order <= 4");
  const int iy = f.grid.nearest_index_y(seg.center.y());
  if (std::abs(f.grid.origin.y() + iy * f.grid.h() - seg.center.y()) > membership_tol(f.grid))
    fail(Err::BoundaryResolution, "segment line does not coincide with a grid row");
  double acc = 0.0;
  for (int k = 0; k <= sobolev_order; ++k) {
    ScalarField d = (k == 0 && normal_order == 0) ? f : derivative(f, {k, normal_order});
    const double nk = l2_norm(d, Region(seg));
    acc += nk * nk;
  }
  return std::sqrt(acc);
}

}  // namespace bilap
