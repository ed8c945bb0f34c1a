#pragma once
#include <array>

#include "bilap/doubling.hpp"

namespace bilap {

struct SimplexGeometry {
  std::array<Vec2, 3> vertices;
  double diam = 0;
  double width = 0;           // min distance between parallel lines containing S
  double relative_width = 0;  // width / diam
  Vec2 barycenter{0, 0};
};

SimplexGeometry simplex_metrics(const Vec2& x1, const Vec2& x2, const Vec2& x3);

/// Sampled covering fact: with rho = K diam(S), every point of B_{rho(1+tau_hat)}(x0) lies in
/// some B_rho(x_i).  Deterministic low-discrepancy samples (Halton bases 2, 3 through the
/// concentric disk map).  Also samples the companion fact B_{rho t}(x_i) within
/// B_{rho t (1 + c1/t)}(x0), c1 = 1/K.
struct CoveringCheck {
  bool pass = false;
  int samples = 0;
  int failures = 0;
  Vec2 first_failure{0, 0};
  double worst_excess = 0;  // max over samples of (min_i |y - x_i| - rho) / diam
  bool second_fact_pass = false;
};

CoveringCheck simplex_covering_check(const SimplexGeometry& s, double big_k, double tau_hat,
                                     int samples, double t_second = 4.0);

struct SimplexLemmaParams {
  double big_k = 4.0;   // vertex ball radii r_i = K diam / 2
  double big_c = 8.0;   // barycenter ball radius C diam
  double c = 0.05;      // demanded gain
  double n0 = 1.0;      // gate below which the check is skipped
};

enum class SimplexVerdict { Pass, Fail, Skipped, VacuousMargin };

struct SimplexLemmaReport {
  SimplexVerdict verdict = SimplexVerdict::Skipped;
  std::string reason;
  double n = 0;               // min vertex index (the N hypothesis)
  std::array<double, 3> vertex_index{0, 0, 0};
  double barycenter_index = 0;
  double required = 0;        // (1+c) N
  double margin = 0;          // barycenter_index - required
};

/// Doubling accumulation at the barycenter: vertex balls B_{K diam/2}(x_i) all carrying index
/// > N (with N > N0) should force N(x0, C diam) > (1+c) N.  Homogeneous saturation (margin
/// within tolerance of zero) is flagged vacuous rather than failed.
SimplexLemmaReport simplex_lemma_check(const ScalarField& u, const SimplexGeometry& s,
                                       double gamma, const SimplexLemmaParams& params);

}  // namespace bilap
