#pragma once
#include <string>

#include "bilap/grid.hpp"

namespace bilap {

/// Flat binary field format: 16-byte header (magic "NLF1", uint32 resolution, double extent)
/// followed by resolution^2 row-major doubles (y rows, x fastest).  The grid origin is not
/// part of the format; load_nlf1 places the field at the supplied origin.
void save_nlf1(const ScalarField& f, const std::string& path);
ScalarField load_nlf1(const std::string& path, const Vec2& origin = Vec2(0, 0));

/// CSV rows "x,y,value"; import reconstructs the grid and requires uniform square coverage.
void save_csv(const ScalarField& f, const std::string& path);
ScalarField load_csv(const std::string& path);

}  // namespace bilap
