#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <sstream>
#include <vector>

#include "bilap/solutions.hpp"

namespace bilap {

namespace {

using Trip = Eigen::Triplet<double>;
using SpMat = Eigen::SparseMatrix<double>;

bool on_boundary(int i, int n) { return i == 0 || i == n - 1; }

}  // namespace

std::pair<ScalarField, SolveReport> solve_bilaplace_bvp(const BvpProblem& prob) {
  const Grid2D& g = prob.potential.grid;
  const int n = g.resolution;
  if (n < 65) fail(Err::BadSpec, "bvp solve needs resolution >= 65");
  const double h2 = g.h() * g.h();
  const int nn = n * n;

  SolveReport rep;
  rep.unknowns = 2 * nn;
  const double wmax = prob.potential.max_abs();
  const double diam = g.extent * std::sqrt(2.0);
  rep.contraction_ok = wmax * diam * diam * diam * diam <= 0.5;

  // unknowns: u at id, v = Delta u at nn + id, id = iy * n + ix
  auto uid = [n](int ix, int iy) { return iy * n + ix; };
  std::vector<Trip> trips;
  trips.reserve(12u * nn);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * nn);

  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int id = uid(ix, iy);
      const Vec2 p = g.node(ix, iy);
      if (on_boundary(ix, n) || on_boundary(iy, n)) {
        trips.emplace_back(id, id, 1.0);
        rhs[id] = prob.g0(p.x(), p.y());
        trips.emplace_back(nn + id, nn + id, 1.0);
        rhs[nn + id] = prob.g1(p.x(), p.y());
        continue;
      }
      // Delta_h u - v = 0
      trips.emplace_back(id, uid(ix + 1, iy), 1.0 / h2);
      trips.emplace_back(id, uid(ix - 1, iy), 1.0 / h2);
      trips.emplace_back(id, uid(ix, iy + 1), 1.0 / h2);
      trips.emplace_back(id, uid(ix, iy - 1), 1.0 / h2);
      trips.emplace_back(id, id, -4.0 / h2);
      trips.emplace_back(id, nn + id, -1.0);
      // Delta_h v - W u = 0
      trips.emplace_back(nn + id, nn + uid(ix + 1, iy), 1.0 / h2);
      trips.emplace_back(nn + id, nn + uid(ix - 1, iy), 1.0 / h2);
      trips.emplace_back(nn + id, nn + uid(ix, iy + 1), 1.0 / h2);
      trips.emplace_back(nn + id, nn + uid(ix, iy - 1), 1.0 / h2);
      trips.emplace_back(nn + id, nn + id, -4.0 / h2);
      trips.emplace_back(nn + id, id, -prob.potential.values(ix, iy));
    }
  }

  SpMat A(2 * nn, 2 * nn);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  Eigen::VectorXd x;
  const double bnorm = std::max(rhs.norm(), 1e-300);
  if (nn <= 170000) {
    rep.method = "sparse-lu";
    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(A);
    lu.factorize(A);
    if (lu.info() != Eigen::Success) fail(Err::SolveFailure, "sparse LU factorization failed");
    x = lu.solve(rhs);
    // iterative refinement until the residual sits at roundoff
    for (int it = 0; it < 5; ++it) {
      Eigen::VectorXd r = rhs - A * x;
      if (r.norm() <= 1e-12 * bnorm) break;
      x += lu.solve(r);
      ++rep.iterations;
    }
  } else {
    rep.method = "bicgstab-ilut";
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> it;
    it.preconditioner().setDroptol(1e-7);
    it.preconditioner().setFillfactor(30);
    it.setTolerance(1e-12);
    it.setMaxIterations(2000);
    it.compute(A);
    x = it.solve(rhs);
    rep.iterations = (int)it.iterations();
    if (it.info() != Eigen::Success) {
      std::ostringstream os;
      os << "iterative solve stalled after " << it.iterations()
         << " iterations, residual " << it.error();
      fail(Err::SolveFailure, os.str());
    }
  }
  // normwise backward error: ||Ax - b|| / (||A||_inf ||x|| + ||b||); the raw ||b||-relative
  // residual is floored near 1e-10 by the residual computation itself at these scales
  double row_max = 0;
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(A, k); it; ++it) row_max = std::max(row_max, std::abs(it.value()));
  }
  rep.linear_residual = (rhs - A * x).norm() / (row_max * x.norm() + bnorm);
  if (rep.linear_residual > 1e-10) {
    std::ostringstream os;
    os << "linear backward error " << rep.linear_residual << " above 1e-10 (" << rep.method << ")";
    fail(Err::SolveFailure, os.str());
  }

  ScalarField u = ScalarField::zeros(g);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) u.values(ix, iy) = x[uid(ix, iy)];
  if (!u.values.allFinite()) fail(Err::SolveFailure, "solution has non-finite values");

  const double side = g.extent - 6 * g.h();
  rep.pde_residual = pde_residual(u, prob.potential,
                                  Cube::centered(g.center(), side));
  return {u, rep};
}

}  // namespace bilap
