#include "bilap/corpus.hpp"

#include <random>

namespace bilap {

namespace {

CorpusMember analytic_member(const std::string& id, const SolutionSpec& spec) {
  AnalyticSolution s = generate_analytic(spec);
  CorpusMember m;
  m.id = id;
  m.u = std::move(s.u);
  m.w = std::move(s.w);
  m.m_bound = s.m_bound;
  m.analytic = true;
  return m;
}

// Boundary data: low-order harmonic-ish polynomial with seeded coefficients in [-1, 1].
struct SeededData {
  std::array<double, 6> c0;  // g0 basis: 1, x, y, x^2 - y^2, x y, x^3 - 3 x y^2
  std::array<double, 3> c1;  // g1 basis: 1, x, y

  explicit SeededData(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    for (double& c : c0) c = uni(rng);
    for (double& c : c1) c = uni(rng);
  }
  double g0(double x, double y) const {
    return c0[0] + c0[1] * x + c0[2] * y + c0[3] * (x * x - y * y) + c0[4] * x * y +
           c0[5] * (x * x * x - 3 * x * y * y);
  }
  double g1(double x, double y) const { return c1[0] + c1[1] * x + c1[2] * y; }
};

CorpusMember bvp_member(const std::string& id, const Grid2D& g, uint64_t seed,
                        const std::function<double(double, double)>& w_fn) {
  CorpusMember m;
  m.id = id;
  m.analytic = false;
  m.w = ScalarField::sample(g, w_fn);
  m.m_bound = m.w.max_abs();
  SeededData data(seed);
  BvpProblem prob{m.w, [data](double x, double y) { return data.g0(x, y); },
                  [data](double x, double y) { return data.g1(x, y); }};
  auto [u, rep] = solve_bilaplace_bvp(prob);
  m.u = std::move(u);
  m.solve = rep;
  return m;
}

}  // namespace

std::vector<CorpusMember> standard_corpus(const CorpusConfig& cfg) {
  std::vector<CorpusMember> out;
  out.reserve(16);

  const Cube dom = Cube::centered(Vec2(0, 0), 2.0);
  auto spec = [&](Family f) {
    SolutionSpec s;
    s.family = f;
    s.domain = dom;
    s.resolution = cfg.analytic_resolution;
    return s;
  };

  {
    SolutionSpec s = spec(Family::HarmonicPolynomial);
    s.k = 1;
    out.push_back(analytic_member("harm-z1-re", s));
    s.k = 2;
    out.push_back(analytic_member("harm-z2-re", s));
    s.k = 3;
    out.push_back(analytic_member("harm-z3-re", s));
    s.k = 4;
    s.real_part = false;
    out.push_back(analytic_member("harm-z4-im", s));
    s.k = 5;
    s.real_part = true;
    out.push_back(analytic_member("harm-z5-re", s));
  }
  {
    SolutionSpec s = spec(Family::SineProduct);
    s.a = M_PI;
    s.b = M_PI;
    out.push_back(analytic_member("sine-pi-pi", s));
    // anisotropic member; frequencies kept moderate so the discrete residual of the
    // generator stays within tolerance at the corpus resolution
    s.a = 0.7 * M_PI;
    s.b = M_PI;
    out.push_back(analytic_member("sine-07pi-pi", s));
  }
  {
    SolutionSpec s = spec(Family::Exponential);
    s.mu = Vec2(1.0, 0.5);
    out.push_back(analytic_member("exp-1-05", s));
  }

  const Grid2D g(dom.lo, dom.side, cfg.bvp_resolution);
  const uint64_t s0 = cfg.seed;
  out.push_back(bvp_member("bvp-w0-a", g, s0 + 1, [](double, double) { return 0.0; }));
  out.push_back(bvp_member("bvp-w0-b", g, s0 + 2, [](double, double) { return 0.0; }));
  out.push_back(bvp_member("bvp-w0005", g, s0 + 3, [](double, double) { return 0.005; }));
  out.push_back(bvp_member("bvp-w1", g, s0 + 4, [](double, double) { return 1.0; }));
  out.push_back(bvp_member("bvp-w10", g, s0 + 5, [](double, double) { return 10.0; }));
  out.push_back(bvp_member("bvp-w50", g, s0 + 6, [](double, double) { return 50.0; }));
  out.push_back(bvp_member("bvp-wsin", g, s0 + 7, [](double x, double y) {
    return 5.0 * (1.0 + 0.5 * std::sin(M_PI * x) * std::cos(M_PI * y));
  }));
  out.push_back(bvp_member("bvp-wgauss", g, s0 + 8, [](double x, double y) {
    return 20.0 * std::exp(-4.0 * (x * x + y * y));
  }));
  return out;
}

}  // namespace bilap
