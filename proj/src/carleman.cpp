#include "bilap/carleman.hpp"

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <sstream>

#include "bilap/fd.hpp"
#include "bilap/interpolate.hpp"

namespace bilap {

TauFlags tau_admissible(double tau, double m_bound, TauRule rule, double c) {
  TauFlags f;
  f.tau = tau;
  const double k = std::round(tau);
  f.dist_to_integer = std::abs(tau - std::max(0.0, k));
  f.quantized = f.dist_to_integer >= 1.0 / 3.0 - 1e-12;
  const double e = rule == TauRule::CarlemanBilaplace ? 0.5 : 1.0 / 3.0;
  f.magnitude_threshold = c * (1.0 + std::pow(std::max(m_bound, 0.0), e));
  f.magnitude_ok = tau > f.magnitude_threshold;
  return f;
}

Annulus support_annulus(const ScalarField& f, const Vec2& center, int pad_nodes) {
  const Grid2D& g = f.grid;
  const double h = g.h();
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (int iy = 0; iy < g.resolution; ++iy)
    for (int ix = 0; ix < g.resolution; ++ix) {
      if (f.values(ix, iy) == 0.0) continue;
      const double r = (g.node(ix, iy) - center).norm();
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
  if (!(rmax > 0.0)) fail(Err::DegenerateField, "field is identically zero");
  const double pad = pad_nodes * h;
  if (rmin - pad <= 0.5 * h)
    fail(Err::SingularWeight, "support (with stencil padding) touches the weight center node");
  return Annulus{center, rmin - pad, rmax + pad};
}

namespace {

// Norms share the quadrature annulus of the padded support so singular weights are never
// evaluated where the integrand has no mass.
struct WeightedNorms {
  const ScalarField* f;
  Vec2 center;
  Annulus region;

  double power_norm(const ScalarField& field, double tau_power, int r_power) const {
    return weighted_l2(
        field, [&](const Vec2& p) { return std::pow((p - center).norm(), -tau_power); }, r_power,
        center, Region(region));
  }
  double phi_norm(const ScalarField& field, const WeightPhi& w, double tau, double extra_r_exp,
                  int r_power) const {
    return weighted_l2(
        field,
        [&](const Vec2& p) {
          const double r = (p - center).norm();
          double v = w.weight(r, tau);
          if (extra_r_exp != 0.0) v *= std::pow(r, extra_r_exp);
          return v;
        },
        r_power, center, Region(region));
  }
};

}  // namespace

CarlemanCheckReport check_carleman_laplace(const ScalarField& f, double tau, const Vec2& center) {
  CarlemanCheckReport rep;
  rep.inequality = "carleman.lap";
  rep.tau = tau;
  rep.tau_flags = tau_admissible(tau, 0.0, TauRule::CarlemanBilaplace);
  if (f.max_abs() == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  WeightedNorms wn{&f, center, support_annulus(f, center, 3)};
  const ScalarField grad = gradient_magnitude(f);
  const ScalarField lap = laplacian5(f);
  const double t_f = tau * wn.power_norm(f, tau, 0);
  const double t_grad = wn.power_norm(grad, tau - 1.0, 0);
  const double t_lap = wn.power_norm(lap, tau - 2.0, 0);
  rep.terms["lhs.tau_f"] = t_f;
  rep.terms["lhs.r_grad"] = t_grad;
  rep.terms["rhs.r2_lap"] = t_lap;
  rep.lhs_total = t_f + t_grad;
  rep.rhs_total = t_lap;
  rep.fitted_c = rep.rhs_total > 0 ? rep.lhs_total / rep.rhs_total : 0.0;
  rep.vacuous = rep.lhs_total == 0.0 && rep.rhs_total == 0.0;
  return rep;
}

namespace {

double interior_fitted_c(const ScalarField& f, double tau, const WeightPhi& w, const Vec2& center,
                         bool secform, CarlemanCheckReport* rep) {
  WeightedNorms wn{&f, center, support_annulus(f, center, 3)};
  if (wn.region.r_outer > w.r0)
    fail(Err::ParameterRegime, "support must stay inside the weight radius r0");
  const ScalarField grad = gradient_magnitude(f);
  const ScalarField lap = laplacian5(f);
  const double rhs = wn.phi_norm(lap, w, tau, 0.0, 2);
  double lhs;
  if (!secform) {
    const double t_f = tau * wn.phi_norm(f, w, tau, 0.0, 0);
    const double t_grad = wn.phi_norm(grad, w, tau, 0.0, 1);
    lhs = t_f + t_grad;
    if (rep) {
      rep->terms["lhs.tau_f"] = t_f;
      rep->terms["lhs.r_grad"] = t_grad;
    }
  } else {
    const ScalarField hess = hessian_magnitude(f);
    const double e2 = w.eps / 2.0;
    const double t_f = std::pow(tau, 1.5) * wn.phi_norm(f, w, tau, e2, 0);
    const double t_grad = tau * wn.phi_norm(grad, w, tau, e2, 1);
    const double t_hess = std::pow(tau, -0.5) * wn.phi_norm(hess, w, tau, e2, 2);
    lhs = t_f + t_grad + t_hess;
    if (rep) {
      rep->terms["lhs.tau32_reps_f"] = t_f;
      rep->terms["lhs.tau_r1eps_grad"] = t_grad;
      rep->terms["lhs.taum12_r2eps_hess"] = t_hess;
    }
  }
  if (rep) {
    rep->terms["rhs.r2_lap"] = rhs;
    rep->lhs_total = lhs;
    rep->rhs_total = rhs;
  }
  return rhs > 0 ? lhs / rhs : 0.0;
}

}  // namespace

CarlemanCheckReport check_carleman_interior(const ScalarField& f, double tau, const WeightPhi& w,
                                            const Vec2& center) {
  CarlemanCheckReport rep;
  rep.inequality = "carleman.interior";
  rep.tau = tau;
  rep.tau_flags = tau_admissible(tau, 0.0, TauRule::CarlemanBilaplace);
  if (f.max_abs() == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  rep.fitted_c = interior_fitted_c(f, tau, w, center, false, &rep);
  return rep;
}

CarlemanCheckReport check_carleman_interior_dilations(const ScalarField& f, double tau,
                                                      const WeightPhi& w,
                                                      const std::vector<double>& lambdas,
                                                      const Vec2& center) {
  if (lambdas.empty()) fail(Err::BadSpec, "dilation check needs at least one lambda");
  CarlemanCheckReport rep = check_carleman_interior(f, tau, w, center);
  if (rep.vacuous) return rep;
  const Annulus supp = support_annulus(f, center, 0);
  double c_min = std::numeric_limits<double>::infinity(), c_max = 0;
  for (double lam : lambdas) {
    double c;
    if (lam == 1.0) {
      c = rep.fitted_c;
    } else {
      if (!(lam > 0 && lam < 1)) fail(Err::BadSpec, "dilation factors must lie in (0, 1]");
      ScalarField fl = ScalarField::zeros(f.grid);
      for (int iy = 0; iy < f.grid.resolution; ++iy)
        for (int ix = 0; ix < f.grid.resolution; ++ix) {
          const Vec2 p = f.grid.node(ix, iy);
          const Vec2 q = center + (p - center) / lam;
          const double r = (q - center).norm();
          if (r >= supp.r_inner && r <= supp.r_outer && f.grid.contains(q))
            fl.values(ix, iy) = sample_bicubic(f, q);
        }
      c = interior_fitted_c(fl, tau, w, center, false, nullptr);
    }
    char key[32];
    std::snprintf(key, sizeof key, "C_lambda_%g", lam);
    rep.extras[key] = c;
    c_min = std::min(c_min, c);
    c_max = std::max(c_max, c);
  }
  rep.extras["dilation_spread"] = c_min > 0 ? (c_max - c_min) / c_min : 0.0;
  return rep;
}

CarlemanCheckReport check_carleman_interior_secform(const ScalarField& f, double tau,
                                                    const WeightPhi& w, const Vec2& center) {
  CarlemanCheckReport rep;
  rep.inequality = "carleman.interior-sec";
  rep.tau = tau;
  rep.tau_flags = tau_admissible(tau, 0.0, TauRule::CarlemanBilaplace);
  if (f.max_abs() == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  rep.fitted_c = interior_fitted_c(f, tau, w, center, true, &rep);
  return rep;
}

CarlemanCheckReport check_carleman_bilaplace(const ScalarField& f, const ScalarField& w,
                                             double tau, const WeightPhi& wp, const Vec2& center) {
  CarlemanCheckReport rep;
  rep.inequality = "carleman.bilap";
  rep.tau = tau;
  rep.tau_flags = tau_admissible(tau, w.max_abs(), TauRule::CarlemanBilaplace);
  if (f.max_abs() == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  WeightedNorms wn{&f, center, support_annulus(f, center, 3)};
  ScalarField op = bilaplacian5(f);
  op.values = op.values - w.values * f.values;
  const double rhs_c_side = wn.phi_norm(op, wp, tau, 0.0, 4);  // carries the constant C
  const double lhs_tau2 = tau * tau * wn.phi_norm(f, wp, tau, 0.0, 0);
  rep.terms["with_c.r4_pde"] = rhs_c_side;
  rep.terms["tau2_f"] = lhs_tau2;
  rep.lhs_total = lhs_tau2;
  rep.rhs_total = rhs_c_side;
  rep.fitted_c = rhs_c_side > 0 ? lhs_tau2 / rhs_c_side : 0.0;
  rep.vacuous = lhs_tau2 == 0.0 && rhs_c_side == 0.0;
  return rep;
}

CarlemanCheckReport check_carleman_boundary(const ScalarField& v, const ScalarField& w,
                                            double tau, const WeightPsi& wp, double radius,
                                            const Vec2& center) {
  CarlemanCheckReport rep;
  rep.inequality = "carleman.boundary";
  rep.tau = tau;
  rep.tau_flags = tau_admissible(tau, w.max_abs(), TauRule::CarlemanBoundary);
  if (v.max_abs() == 0.0) {
    rep.vacuous = true;
    return rep;
  }
  const Grid2D& g = v.grid;
  // support must avoid the curved boundary of the half ball
  const Annulus shell{center, 0.97 * radius, radius};
  double shell_sup = 0.0;
  try {
    shell_sup = sup_norm(v, Region(shell));
  } catch (const Error&) {
  }
  if (shell_sup != 0.0)
    fail(Err::HalfBallSupport, "field does not vanish near the curved half-ball boundary");
  if (!g.contains_ball(center, radius, 1e-9 * g.h()))
    fail(Err::HalfBallSupport, "half ball leaves the grid");

  const HalfBall inside{center, radius};
  const BoundarySegment flat{center, radius};
  auto psi_w = [&](const Vec2& p) { return std::exp(tau * wp.psi(p)); };

  ScalarField pde = bilaplacian5(v);
  pde.values = pde.values - w.values * v.values;
  const ScalarField lap = laplacian5(v);
  const ScalarField grad_lap = gradient_magnitude(lap);
  const ScalarField grad = gradient_magnitude(v);

  const double s = wp.s;
  const double t_int = weighted_l2(pde, psi_w, 0, center, Region(inside));
  const double t_lap_b = std::pow(tau, 1.5) * s * s * weighted_l2(lap, psi_w, 0, center, Region(flat));
  const double t_gradlap_b =
      std::pow(tau, 0.5) * s * weighted_l2(grad_lap, psi_w, 0, center, Region(flat));
  const double t_v_b =
      std::pow(tau, 3.0) * std::pow(s, 4) * weighted_l2(v, psi_w, 0, center, Region(flat));
  const double t_grad_b =
      tau * tau * std::pow(s, 3) * weighted_l2(grad, psi_w, 0, center, Region(flat));
  const double rhs = std::pow(tau, 3.0) * std::pow(s, 4) * weighted_l2(v, psi_w, 0, center, Region(inside));

  rep.terms["lhs.pde_interior"] = t_int;
  rep.terms["lhs.trace_lap"] = t_lap_b;
  rep.terms["lhs.trace_gradlap"] = t_gradlap_b;
  rep.terms["lhs.trace_v"] = t_v_b;
  rep.terms["lhs.trace_grad"] = t_grad_b;
  rep.lhs_total = t_int + t_lap_b + t_gradlap_b + t_v_b + t_grad_b;
  rep.rhs_total = rhs;
  rep.terms["rhs.tau3s4_v"] = rhs;
  // largest C with LHS >= C * RHS
  rep.fitted_c = rep.rhs_total > 0 ? rep.lhs_total / rep.rhs_total : 0.0;
  rep.vacuous = rep.lhs_total == 0.0 && rhs == 0.0;
  return rep;
}

CaccioppoliReport check_caccioppoli_interior(const ScalarField& u, const ScalarField& w, double R,
                                             double c4, double c3, double c2, double c1,
                                             const Vec2& center) {
  if (!(0 < c4 && c4 < c3 && c3 < c2 && c2 < c1 && c1 < 1))
    fail(Err::ParameterRegime, "caccioppoli radii must satisfy 0 < c4 < c3 < c2 < c1 < 1");
  CaccioppoliReport rep;
  const Annulus mid{center, c3 * R, c2 * R};
  const Annulus wide{center, c4 * R, c1 * R};
  for (int k = 0; k <= 3; ++k) {
    const ScalarField dk = derivative_magnitude(u, k);
    const double nk = weighted_l2(
        dk, [](const Vec2&) { return 1.0; }, k, center, Region(mid));
    rep.terms["lhs.order" + std::to_string(k)] = nk;
    rep.lhs += nk;
  }
  const double m = w.max_abs();
  rep.rhs = std::pow(m + 1.0, 3) * l2_norm(u, Region(wide));
  rep.terms["rhs.w1_3_u"] = rep.rhs;
  rep.fitted_c = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

CaccioppoliReport check_caccioppoli_boundary(const ScalarField& u, const ScalarField& w,
                                             double scale, const Vec2& center) {
  CaccioppoliReport rep;
  const HalfBall inner{center, 0.5 * scale};
  const HalfBall outer{center, 2.0 * scale};
  const BoundarySegment flat{center, 2.0 * scale};
  const ScalarField lap = laplacian5(u);
  const double t_gradlap = l2_norm(gradient_magnitude(lap), Region(inner));
  const double t_hess = l2_norm(hessian_magnitude(u), Region(inner));
  const double t_grad = l2_norm(gradient_magnitude(u), Region(inner));
  rep.terms["lhs.grad_lap"] = t_gradlap;
  rep.terms["lhs.hess"] = t_hess;
  rep.terms["lhs.grad"] = t_grad;
  rep.lhs = t_gradlap + t_hess + t_grad;
  double data = 0.0;
  for (int j = 0; j <= 3; ++j) data += trace_sobolev_norm(u, flat, j, 3 - j);
  const double m = w.max_abs();
  rep.rhs = m * l2_norm(u, Region(outer)) + data;
  rep.terms["rhs.m_u"] = m * l2_norm(u, Region(outer));
  rep.terms["rhs.cauchy_data"] = data;
  rep.fitted_c = rep.rhs > 0 ? rep.lhs / rep.rhs : 0.0;
  return rep;
}

double sharp_mode_constant(int k, double tau, double t_window, int points) {
  if (k < 0 || points < 16) fail(Err::BadSpec, "sharp_mode_constant needs k >= 0, points >= 16");
  const int n = points;
  const double dt = t_window / (n + 1);
  // A = (D + (tau-1) I)^2 - k^2 I with central-difference D and Dirichlet ends
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) d(i, i - 1) = -1.0 / (2 * dt);
    if (i + 1 < n) d(i, i + 1) = 1.0 / (2 * dt);
  }
  Eigen::MatrixXd m = d + (tau - 1.0) * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd a = m * m - (double)k * k * Eigen::MatrixXd::Identity(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
  const double lam = std::max(es.eigenvalues()(0), 0.0);
  const double sigma_min = std::sqrt(lam);
  if (!(sigma_min > 0)) fail(Err::ParameterRegime, "mode operator is singular at this tau");
  return 1.0 / sigma_min;
}

PropagationReport check_propagation(const ScalarField& u, const ScalarField& w, double s,
                                    double b_n, double scale, const Vec2& center) {
  if (!(s > 0) || !(b_n > 0)) fail(Err::ParameterRegime, "propagation needs s > 0 and b_n > 0");
  PropagationReport rep;
  rep.p0 = std::exp(-s * (1 + b_n)) - std::exp(-s * (4.0 / 3.0 + b_n));
  rep.p1 = 1.0 - std::exp(-s * (1 + b_n));
  rep.kappa = rep.p1 / (rep.p1 + rep.p0);
  rep.interior_small = l2_norm(u, Region(HalfBall{center, scale}));
  rep.interior_big = l2_norm(u, Region(HalfBall{center, 2 * scale}));
  double data = 0.0;
  const BoundarySegment flat{center, 2 * scale};
  for (int j = 0; j <= 3; ++j) data += trace_sobolev_norm(u, flat, j, 3 - j);
  rep.cauchy_data = data;
  const double denom =
      std::pow(rep.interior_big, rep.kappa) * std::pow(rep.cauchy_data, 1 - rep.kappa);
  rep.violation_candidate = rep.cauchy_data <= 1e-14 && rep.interior_small > 1e-12;
  rep.fitted_factor = denom > 0 ? rep.interior_small / denom : 0.0;
  const double m = w.max_abs();
  rep.implied_c =
      rep.fitted_factor > 0 ? std::log(rep.fitted_factor) / (1.0 + std::cbrt(m)) : 0.0;
  return rep;
}

}  // namespace bilap
