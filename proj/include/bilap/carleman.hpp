#pragma once
#include <map>
#include <string>
#include <vector>

#include "bilap/norms.hpp"

namespace bilap {

/// Radial weight phi(r) = -g(ln r) with g(t) = t - e^{eps t}, i.e. phi(r) = -ln r + r^eps.
/// Strictly decreasing on (0, r0) for the r0 used here; e^{tau phi} = r^{-tau} e^{tau r^eps}.
struct WeightPhi {
  double eps = 0.1;
  double r0 = 0.5;

  double g(double t) const { return t - std::exp(eps * t); }
  double phi(double r) const {
    if (!(r > 0)) fail(Err::BadSpec, "phi needs r > 0");
    return -std::log(r) + std::pow(r, eps);
  }
  double weight(double r, double tau) const { return std::exp(tau * phi(r)); }
};

/// psi(x) = e^{s h(x)}, h(x) = -|x - b| with b = (0, -b_n); 0 < psi < 1 everywhere.
struct WeightPsi {
  double s = 5.0;
  double b_n = 0.1;

  double h(const Vec2& x) const { return -(x - Vec2(0.0, -b_n)).norm(); }
  double psi(const Vec2& x) const { return std::exp(s * h(x)); }
};

enum class TauRule { CarlemanBilaplace, CarlemanBoundary };  // ||W||^{1/2} vs ||W||^{1/3}

struct TauFlags {
  double tau = 0;
  double dist_to_integer = 0;
  bool quantized = false;      // dist(tau, N) >= 1/3, non-strict
  double magnitude_threshold = 0;
  bool magnitude_ok = false;   // tau > C (1 + ||W||^e), e per rule
};

TauFlags tau_admissible(double tau, double m_bound, TauRule rule, double c = 1.0);

/// One verified weighted inequality: itemized terms, the tight constant, admissibility flags.
/// fitted_c is the ratio that turns the stated inequality into an equality (0 when vacuous).
struct CarlemanCheckReport {
  std::string inequality;
  double tau = 0;
  std::map<std::string, double> terms;   // itemized contributions, keys sorted
  double lhs_total = 0;
  double rhs_total = 0;
  double fitted_c = 0;
  bool vacuous = false;
  TauFlags tau_flags;
  std::map<std::string, double> extras;  // sweep ratios, dilation spreads, kappa values...
};

/// tau ||r^-tau f|| + ||r^{-tau+1} grad f|| <= C ||r^{-tau+2} lap f||.  f must be compactly
/// supported away from the weight center and the grid boundary; the quadrature annulus is
/// the padded support.  Support touching the center raises SingularSupport via singular-weight.
CarlemanCheckReport check_carleman_laplace(const ScalarField& f, double tau,
                                           const Vec2& center = Vec2(0, 0));

/// tau ||e^{tau phi} f|| + ||e^{tau phi} r grad f|| <= C ||e^{tau phi} r^2 lap f||, support
/// inside {r < r0}.
CarlemanCheckReport check_carleman_interior(const ScalarField& f, double tau, const WeightPhi& w,
                                            const Vec2& center = Vec2(0, 0));

/// The same check re-run on the dilated fields f_lambda(x) = f(x / lambda) (bicubic
/// resampling, zero outside the shrunk support); extras carry the per-lambda constants and
/// their relative spread.  The field must resolve the dilated ramps (resolution >= 513 for
/// lambda down to 1/4 with the standard profiles).
CarlemanCheckReport check_carleman_interior_dilations(const ScalarField& f, double tau,
                                                      const WeightPhi& w,
                                                      const std::vector<double>& lambdas = {
                                                          1.0, 0.5, 0.25},
                                                      const Vec2& center = Vec2(0, 0));

/// The three-term variant carrying r^{eps/2} factors on the left side:
/// tau^{3/2}||e^{tp} r^{e/2} f|| + tau ||e^{tp} r^{1+e/2} grad f|| + tau^{-1/2}||e^{tp} r^{2+e/2} hess f||
/// against the same right side; its constant drifts under dilation.
CarlemanCheckReport check_carleman_interior_secform(const ScalarField& f, double tau,
                                                    const WeightPhi& w,
                                                    const Vec2& center = Vec2(0, 0));

/// C ||r^4 e^{tau phi} (lap^2 f - W f)|| >= tau^2 ||e^{tau phi} f||; the extras record the
/// tight-constant ratio between tau and the quantization-adjusted 2 tau (expected >= 3).
CarlemanCheckReport check_carleman_bilaplace(const ScalarField& f, const ScalarField& w,
                                             double tau, const WeightPhi& wp,
                                             const Vec2& center = Vec2(0, 0));

/// Half-ball estimate: interior PDE term plus four boundary-trace terms against
/// tau^3 s^4 ||e^{tau psi} v|| on the half ball.  v must vanish near the curved boundary.
CarlemanCheckReport check_carleman_boundary(const ScalarField& v, const ScalarField& w,
                                            double tau, const WeightPsi& wp, double radius = 3.0,
                                            const Vec2& center = Vec2(0, 0));

/// Interior Caccioppoli on annuli: sum_{|a|<=3} ||r^{|a|} D^a u||_{A(c3 R, c2 R)} against
/// (||W||_inf + 1)^3 ||u||_{A(c4 R, c1 R)}.
struct CaccioppoliReport {
  double lhs = 0;
  double rhs = 0;
  double fitted_c = 0;  // lhs / rhs
  std::map<std::string, double> terms;
};

CaccioppoliReport check_caccioppoli_interior(const ScalarField& u, const ScalarField& w, double R,
                                             double c4, double c3, double c2, double c1,
                                             const Vec2& center = Vec2(0, 0));

/// Boundary Caccioppoli on the half ball (radii 1/2, 2 scaled by `scale`):
/// ||grad lap u|| + ||hess u|| + ||grad u|| on B+_{scale/2}  <=
///   C ( M ||u||_{B+_{2 scale}} + sum_j ||d^j_nu u||_{H^{3-j}(flat boundary)} ).
CaccioppoliReport check_caccioppoli_boundary(const ScalarField& u, const ScalarField& w,
                                             double scale = 1.0, const Vec2& center = Vec2(0, 0));

/// Cauchy propagation of smallness on the half ball.  kappa comes from the explicit formula
/// p0 = e^{-s(1+b_n)} - e^{-s(4/3+b_n)}, p1 = 1 - e^{-s(1+b_n)}, kappa = p1/(p1+p0).
struct PropagationReport {
  double p0 = 0, p1 = 0, kappa = 0;
  double interior_small = 0;  // ||u|| on B+_scale
  double interior_big = 0;    // ||u|| on B+_{2 scale}
  double cauchy_data = 0;     // sum of trace Sobolev norms
  double fitted_factor = 0;   // interior_small / (big^kappa data^{1-kappa})
  double implied_c = 0;       // ln(fitted) / (1 + M^{1/3})
  bool violation_candidate = false;  // zero data but nonzero interior norm
};

PropagationReport check_propagation(const ScalarField& u, const ScalarField& w, double s,
                                    double b_n, double scale = 1.0, const Vec2& center = Vec2(0, 0));

/// Padded annular support of a field about `center`; pad is in nodes.  Raises SingularWeight
/// when the padded support reaches the center node.
Annulus support_annulus(const ScalarField& f, const Vec2& center, int pad_nodes);

/// Sharp constant of the power-weight estimate restricted to the angular mode k, computed in
/// Mellin coordinates t = ln r: the conjugated radial operator is (d/dt + (tau-1))^2 - k^2,
/// and the constant is 1 / sigma_min over a log window of width t_window.  Unlike the fitted
/// constant of a fixed field, this sees the resonance: it blows up like 1/|(tau-1)^2 - k^2|
/// as tau approaches k + 1 (two dimensions).
double sharp_mode_constant(int k, double tau, double t_window = 60.0, int points = 600);

}  // namespace bilap
