#pragma once
#include <string>
#include <vector>

#include "bilap/doubling.hpp"
#include "bilap/region.hpp"

namespace bilap {

struct NodalSegment {
  Vec2 a, b;
  double length() const { return (b - a).norm(); }
};

/// Straight segments approximating {u = 0} inside a cube, one or two per grid cell.
struct NodalSet {
  std::vector<NodalSegment> segments;
  double total_length = 0;
  Cube source{Vec2(0, 0), 1.0};
  std::string saddle_rule = "cell-average";
};

/// Marching squares over the cells of Q (open-cube convention: contours riding along the
/// cube sides are dropped).  Exact node zeros are perturbed by +1e-12 ||u||_inf before
/// sign classification; saddle cells split by the sign of the cell average.
NodalSet extract_nodal_set(const ScalarField& u, const Cube& q);

double hausdorff_length(const NodalSet& s);

/// per_axis^2 equal subcubes tiling q exactly.
std::vector<Cube> partition(const Cube& q, int per_axis);

struct SubcubeIndexRow {
  Cube cube;
  int i = 0, j = 0;
  double n_value = 0;
  bool above_threshold = false;
};

struct PartitionReport {
  Cube cube;
  int per_axis = 0;
  double n_of_q = 0;        // measured N(Q)
  double n_bound = 0;       // the N the check ran against
  double threshold = 0;
  std::vector<SubcubeIndexRow> rows;
  double min_row_value = 0;  // hyperplane check: min over the center row
  int count_above = 0;       // bad-cube check
  bool pass = false;
  bool gated = false;        // N below the N0 premise: the statement is vacuous
  bool precondition_ok = true;
};

struct SubcubeProbe {
  int centers_per_axis = 3;
  int radii_count = 4;
};

/// Partition into (2A+1)^2 subcubes; among those meeting the horizontal center line some
/// subcube must have doubling index <= N/2.  The statement presumes N > N0: runs with
/// N <= n0_gate are reported as gated (vacuously true).  n_bound < 0 uses the measured N(Q).
PartitionReport hyperplane_lemma_check(const ScalarField& u, const Cube& q, int a_half,
                                       double n_bound, double n0_gate = 0.0,
                                       const SubcubeProbe& probe = {});

/// Partition into A^2 subcubes; the count with index above max(N(Q)/(1+c), N0) must stay
/// <= A/2.
PartitionReport bad_cube_count(const ScalarField& u, const Cube& q, int a, double n0, double c,
                               const SubcubeProbe& probe = {});

/// F(N) <= 2A F(N/(1+c)) iterated down to N0: closed form (N/N0)^{log_{1+c} 2A} F(N0);
/// N < N0 returns the base value.
double nodal_bound_recursion(double n, double n0, double a, double c, double f_n0);
double nodal_bound_recursion_loop(double n, double n0, double a, double c, double f_n0);

struct BoundLedger {
  double m = 1, a = 10, c = 0.1, n0 = 1, cover_constant = 1;
  double alpha0 = 0;  // log_{1+c}(2A)
  double beta = 0;    // alpha0/3 + 1/4
  double f_n0 = 1;
  double bound = 0;   // cover_constant * M^beta
};

BoundLedger assemble_global_bound(double m, double a, double c, double cover_constant,
                                  double n0 = 1.0, double f_n0 = 1.0);

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;
};

/// Least-squares slope of log(length) against log(M); needs >= 3 points spanning a decade.
SlopeFit scaling_exponent_fit(const std::vector<std::pair<double, double>>& m_and_length);

}  // namespace bilap
