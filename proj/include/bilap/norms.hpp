#pragma once
#include <functional>

#include "bilap/region.hpp"

namespace bilap {

/// max |f| over grid nodes inside the region.  Throws RegionEmpty when no node qualifies and
/// BoundaryMargin when the region reaches into the field's invalid derivative ring.
double sup_norm(const ScalarField& f, const Region& region);

/// sqrt(sum f^2 h^2) over nodes in a 2-D region; 1-D trapezoid weights on boundary segments.
double l2_norm(const ScalarField& f, const Region& region);

/// sqrt(sum (w(p) |p-center|^power f)^2 h^2).  The weight must be finite on every node of the
/// region; a non-finite value raises SingularWeight naming the node.
double weighted_l2(const ScalarField& f, const std::function<double(const Vec2&)>& weight,
                   int radial_power, const Vec2& center, const Region& region);

/// Count of grid nodes inside the region.
int node_count(const ScalarField& f, const Region& region);

/// H^m norm of d^j f / dy^j restricted to a boundary segment: sum in quadrature of the L2
/// norms of tangential derivatives of order 0..m, all by central differences.
double trace_sobolev_norm(const ScalarField& f, const BoundarySegment& seg, int normal_order,
                          int sobolev_order);

}  // namespace bilap
