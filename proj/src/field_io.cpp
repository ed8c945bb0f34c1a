#include "bilap/field_io.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace bilap {

void save_nlf1(const ScalarField& f, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(Err::Io, "cannot open " + path + " for writing");
  const char magic[4] = {'N', 'L', 'F', '1'};
  const uint32_t res = (uint32_t)f.grid.resolution;
  const double extent = f.grid.extent;
  os.write(magic, 4);
  os.write(reinterpret_cast<const char*>(&res), 4);
  os.write(reinterpret_cast<const char*>(&extent), 8);
  std::vector<double> row(f.grid.resolution);
  for (int iy = 0; iy < f.grid.resolution; ++iy) {
    for (int ix = 0; ix < f.grid.resolution; ++ix) row[ix] = f.values(ix, iy);
    os.write(reinterpret_cast<const char*>(row.data()), 8 * row.size());
  }
  if (!os) fail(Err::Io, "write failed for " + path);
}

ScalarField load_nlf1(const std::string& path, const Vec2& origin) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(Err::Io, "cannot open " + path);
  char magic[4];
  uint32_t res = 0;
  double extent = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&res), 4);
  is.read(reinterpret_cast<char*>(&extent), 8);
  if (!is || std::memcmp(magic, "NLF1", 4) != 0) fail(Err::Io, path + " is not an NLF1 field");
  Grid2D g(origin, extent, (int)res);
  ScalarField f = ScalarField::zeros(g);
  std::vector<double> row(res);
  for (uint32_t iy = 0; iy < res; ++iy) {
    is.read(reinterpret_cast<char*>(row.data()), 8 * row.size());
    if (!is) fail(Err::Io, path + " truncated");
    for (uint32_t ix = 0; ix < res; ++ix) f.values(ix, iy) = row[ix];
  }
  if (!f.values.allFinite()) fail(Err::Io, path + " holds non-finite values");
  return f;
}

void save_csv(const ScalarField& f, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(Err::Io, "cannot open " + path + " for writing");
  os << "x,y,value\n";
  char buf[96];
  for (int iy = 0; iy < f.grid.resolution; ++iy) {
    for (int ix = 0; ix < f.grid.resolution; ++ix) {
      const Vec2 p = f.grid.node(ix, iy);
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", p.x(), p.y(), f.values(ix, iy));
      os << buf;
    }
  }
}

ScalarField load_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Err::Io, "cannot open " + path);
  std::string line;
  std::getline(is, line);  // header
  struct Row {
    double x, y, v;
  };
  std::vector<Row> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Row r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &r.x, &r.y, &r.v) != 3)
      fail(Err::Io, "bad CSV row: " + line);
    rows.push_back(r);
  }
  if (rows.empty()) fail(Err::Io, path + " has no data rows");
  std::set<double> xs, ys;
  for (const Row& r : rows) {
    xs.insert(r.x);
    ys.insert(r.y);
  }
  const int n = (int)xs.size();
  if ((int)ys.size() != n || (int)rows.size() != n * n)
    fail(Err::Io, "CSV does not cover a square grid");
  const double x0 = *xs.begin(), x1 = *xs.rbegin();
  const double y0 = *ys.begin();
  Grid2D g(Vec2(x0, y0), x1 - x0, n);
  const double h = g.h();
  ScalarField f = ScalarField::zeros(g);
  for (const Row& r : rows) {
    const int ix = (int)std::lround((r.x - x0) / h);
    const int iy = (int)std::lround((r.y - y0) / h);
    if (ix < 0 || iy < 0 || ix >= n || iy >= n) fail(Err::Io, "CSV node off-grid");
    f.values(ix, iy) = r.v;
  }
  return f;
}

}  // namespace bilap
