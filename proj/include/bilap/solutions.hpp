#pragma once
#include <functional>
#include <string>

#include "bilap/region.hpp"

namespace bilap {

enum class Family { HarmonicPolynomial, SineProduct, Exponential, Bvp };

/// Declarative description of one solution of Delta^2 u = W u.
struct SolutionSpec {
  Family family = Family::HarmonicPolynomial;
  // harmonic-polynomial
  int k = 1;
  bool real_part = true;
  // sine-product u = sin(a x) sin(b y)
  double a = M_PI;
  double b = M_PI;
  // exponential u = exp(mu . x)
  Vec2 mu{1.0, 0.0};
  Cube domain = Cube::centered(Vec2(0, 0), 2.0);
  int resolution = 257;
};

struct AnalyticSolution {
  ScalarField u;
  ScalarField w;
  double m_bound = 0.0;  // recorded ||W||_inf (0 for biharmonic families)
  std::function<double(double, double)> eval;
};

/// Exact families: harmonic polynomials (W = 0), sine products (W = (a^2+b^2)^2),
/// exponentials (W = |mu|^4); the PDE identity holds pointwise.
AnalyticSolution generate_analytic(const SolutionSpec& spec);

struct SolveReport {
  int unknowns = 0;
  std::string method;
  double linear_residual = 0.0;
  double pde_residual = 0.0;
  bool contraction_ok = true;
  int iterations = 0;
};

struct BvpProblem {
  ScalarField potential;                        // W on the solve grid
  std::function<double(double, double)> g0;     // boundary trace of u
  std::function<double(double, double)> g1;     // boundary trace of Delta u
};

/// Navier splitting: solve the coupled system Delta_h u = v, Delta_h v = W u with 5-point
/// stencils, boundary rows u = g0 and v = g1.  Direct sparse factorization at these sizes,
/// iterative fallback above; linear residual must come out <= 1e-10.
std::pair<ScalarField, SolveReport> solve_bilaplace_bvp(const BvpProblem& prob);

/// || Delta_h^2 u - W u ||_L2(region) / max(||u||_L2(region), 1e-30); region must keep a
/// 2-node margin from the grid boundary.
double pde_residual(const ScalarField& u, const ScalarField& w, const Region& region);

std::string family_name(Family f);

}  // namespace bilap
