#include "bilap/solutions.hpp"

#include <complex>

#include "bilap/fd.hpp"
#include "bilap/norms.hpp"

namespace bilap {

std::string family_name(Family f) {
  switch (f) {
    case Family::HarmonicPolynomial: return "harmonic-polynomial";
    case Family::SineProduct: return "sine-product";
    case Family::Exponential: return "exponential";
    default: return "bvp";
  }
}

AnalyticSolution generate_analytic(const SolutionSpec& spec) {
  Grid2D g(spec.domain.lo, spec.domain.side, spec.resolution);
  AnalyticSolution out;
  switch (spec.family) {
    case Family::HarmonicPolynomial: {
      if (spec.k < 1 || spec.k > 8) fail(Err::BadSpec, "harmonic degree k must be in [1,8]");
      const int k = spec.k;
      const bool re = spec.real_part;
      out.eval = [k, re](double x, double y) {
        const std::complex<double> z(x, y);
        const std::complex<double> zk = std::pow(z, k);
        return re ? zk.real() : zk.imag();
      };
      out.m_bound = 0.0;
      break;
    }
    case Family::SineProduct: {
      if (!(spec.a > 0) || !(spec.b > 0)) fail(Err::BadSpec, "sine frequencies must be positive");
      const double a = spec.a, b = spec.b;
      out.eval = [a, b](double x, double y) { return std::sin(a * x) * std::sin(b * y); };
      const double s = a * a + b * b;
      out.m_bound = s * s;
      break;
    }
    case Family::Exponential: {
      const Vec2 mu = spec.mu;
      out.eval = [mu](double x, double y) { return std::exp(mu.x() * x + mu.y() * y); };
      const double s = mu.squaredNorm();
      out.m_bound = s * s;
      break;
    }
    default:
      fail(Err::BadSpec, "generate_analytic expects an analytic family");
  }
  out.u = ScalarField::sample(g, out.eval);
  const double w = out.m_bound;
  out.w = ScalarField::sample(g, [w](double, double) { return w; });
  return out;
}

double pde_residual(const ScalarField& u, const ScalarField& w, const Region& region) {
  if (!u.grid.same(w.grid)) fail(Err::BadSpec, "residual needs matching grids");
  ScalarField b = bilaplacian5(u);  // invalid_margin = 2; norms enforce the margin
  ScalarField r = b;
  r.values = b.values - w.values * u.values;
  const double num = l2_norm(r, region);
  ScalarField uc = u;
  uc.invalid_margin = b.invalid_margin;
  const double den = std::max(l2_norm(uc, region), 1e-30);
  return num / den;
}

}  // namespace bilap
