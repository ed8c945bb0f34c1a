#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "bilap/bump.hpp"
#include "bilap/carleman.hpp"
#include "bilap/fd.hpp"

using namespace bilap;

namespace {

ScalarField annular_bump(const Grid2D& g) {
  return make_bump(BumpProfile{0.2, 0.1, 0.55, 0.15}, g, Vec2(0, 0));
}

ScalarField bump_times_harmonic(const Grid2D& g, int k) {
  ScalarField f = annular_bump(g);
  for (int iy = 0; iy < g.resolution; ++iy)
    for (int ix = 0; ix < g.resolution; ++ix) {
      const Vec2 p = g.node(ix, iy);
      f.values(ix, iy) *= std::pow(std::complex<double>(p.x(), p.y()), k).real();
    }
  return f;
}

}  // namespace

TEST_CASE("weight functions") {
  WeightPhi w{0.1, 0.5};
  SUBCASE("g and phi point values") {
    CHECK(w.g(0.0) == -1.0);
    WeightPhi w2{0.37, 0.5};
    CHECK(w2.g(0.0) == -1.0);
    CHECK(w.phi(1.0) == doctest::Approx(1.0));
    CHECK(w2.phi(1.0) == doctest::Approx(1.0));
    CHECK(w.phi(std::exp(-10.0)) == doctest::Approx(10.0 + std::exp(-1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(w.phi(0.0), Error);
  }
  SUBCASE("phi strictly decreasing below r0") {
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 0.01; r <= 0.5; r += 0.01) {
      const double v = w.phi(r);
      CHECK(v < prev);
      prev = v;
    }
  }
  SUBCASE("psi stays in (0,1)") {
    WeightPsi psi{5.0, 0.1};
    for (double x : {-3.0, 0.0, 2.5})
      for (double y : {0.0, 0.5, 3.0}) {
        const double v = psi.psi(Vec2(x, y));
        CHECK(v > 0.0);
        CHECK(v < 1.0);
      }
  }
}

TEST_CASE("tau admissibility") {
  SUBCASE("quantization distance") {
    CHECK(tau_admissible(5.5, 0, TauRule::CarlemanBilaplace).quantized);
    CHECK_FALSE(tau_admissible(5.2, 0, TauRule::CarlemanBilaplace).quantized);
    // non-strict boundary: dist exactly 1/3
    CHECK(tau_admissible(16.0 / 3.0, 0, TauRule::CarlemanBilaplace).quantized);
  }
  SUBCASE("magnitude thresholds per rule") {
    const TauFlags a = tau_admissible(10.0, 16.0, TauRule::CarlemanBilaplace);
    CHECK(a.magnitude_threshold == doctest::Approx(1.0 + 4.0));  // 1 + 16^{1/2}
    CHECK(a.magnitude_ok);
    const TauFlags b = tau_admissible(3.0, 8.0, TauRule::CarlemanBoundary);
    CHECK(b.magnitude_threshold == doctest::Approx(1.0 + 2.0));  // 1 + 8^{1/3}
    CHECK_FALSE(b.magnitude_ok);
  }
}

TEST_CASE("support annulus") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 257);
  SUBCASE("padded radii bracket the support") {
    ScalarField f = annular_bump(g);
    const Annulus a = support_annulus(f, Vec2(0, 0), 3);
    CHECK(a.r_inner < 0.2);
    CHECK(a.r_inner > 0.1);
    CHECK(a.r_outer > 0.7);
    CHECK(a.r_outer < 0.8);
  }
  SUBCASE("support touching the center is refused") {
    ScalarField f = make_bump(BumpProfile{0, 0, 0.3, 0.2}, g, Vec2(0, 0));
    CHECK_THROWS_AS(support_annulus(f, Vec2(0, 0), 3), Error);
  }
}

TEST_CASE("carleman estimate for the laplacian") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 257);
  SUBCASE("zero field is vacuous") {
    const CarlemanCheckReport rep = check_carleman_laplace(ScalarField::zeros(g), 5.5);
    CHECK(rep.vacuous);
    CHECK(rep.fitted_c == 0.0);
  }
  SUBCASE("radial bump reproduced by a 1-D radial quadrature oracle") {
    // radial reduction: ||r^{-a} v||_{L2(R^2)}^2 = 2 pi Int r^{-2a} v(r)^2 r dr for radial v
    const ScalarField f = annular_bump(g);
    const double tau = 5.5;
    const CarlemanCheckReport rep = check_carleman_laplace(f, tau);
    CHECK(std::isfinite(rep.fitted_c));
    CHECK(rep.fitted_c > 0);

    BumpProfile prof{0.2, 0.1, 0.55, 0.15};
    const int nq = 200000;  // dense radial trapezoid, independent of the 2-D grid path
    const double r_lo = 0.15, r_hi = 0.75, dr = (r_hi - r_lo) / nq;
    auto eta = [&](double r) { return bump_value(prof, r); };
    auto deta = [&](double r) {  // central difference at oracle resolution
      return (eta(r + 1e-7) - eta(r - 1e-7)) / 2e-7;
    };
    auto lap = [&](double r) {  // radial laplacian eta'' + eta'/r
      const double d2 = (eta(r + 1e-5) - 2 * eta(r) + eta(r - 1e-5)) / 1e-10;
      return d2 + deta(r) / r;
    };
    double nf = 0, ng = 0, nl = 0;
    for (int i = 0; i <= nq; ++i) {
      const double r = r_lo + i * dr;
      const double wq = (i == 0 || i == nq) ? 0.5 : 1.0;
      nf += wq * std::pow(r, -2 * tau) * eta(r) * eta(r) * r * dr;
      ng += wq * std::pow(r, -2 * (tau - 1)) * deta(r) * deta(r) * r * dr;
      nl += wq * std::pow(r, -2 * (tau - 2)) * lap(r) * lap(r) * r * dr;
    }
    const double oracle =
        (tau * std::sqrt(2 * M_PI * nf) + std::sqrt(2 * M_PI * ng)) / std::sqrt(2 * M_PI * nl);
    CHECK(rep.fitted_c == doctest::Approx(oracle).epsilon(0.02));
  }
  SUBCASE("homogeneous in the field: C unchanged under f -> lambda f") {
    const ScalarField f = bump_times_harmonic(g, 5);
    const CarlemanCheckReport r1 = check_carleman_laplace(f, 5.5);
    ScalarField f2 = f;
    f2.values *= 37.0;
    const CarlemanCheckReport r2 = check_carleman_laplace(f2, 5.5);
    CHECK(r1.fitted_c == doctest::Approx(r2.fitted_c).epsilon(1e-10));
  }
  SUBCASE("fitted constant on a fixed field stays finite and smooth through integers") {
    // the resonance is a supremum over test functions; a fixed bump-harmonic field has a
    // log-support of ~1.6 e-folds, far below the ~1/dist window the blow-up needs, so its
    // fitted constant varies smoothly through tau = 5 and 6
    Grid2D g513 = Grid2D::centered(Vec2(0, 0), 2.0, 513);
    const ScalarField f = bump_times_harmonic(g513, 5);
    double prev = -1;
    for (double tau : {4.9, 5.0, 5.1, 5.5, 6.0, 6.5}) {
      const double c = check_carleman_laplace(f, tau).fitted_c;
      CHECK(std::isfinite(c));
      CHECK(c > 0.02);
      CHECK(c < 1.0);
      if (prev > 0) CHECK(std::abs(c - prev) <= 0.5 * prev);  // no spikes
      prev = c;
    }
  }
  SUBCASE("mode-restricted sharp constant shows the resonance at tau = k + 1") {
    // Mellin route: the conjugated radial operator (d/dt + (tau-1))^2 - k^2 on a wide log
    // window; its inverse norm blows up like 1 / |(tau-1)^2 - k^2|
    const int k = 4;  // resonant at tau = 5 in two dimensions
    const double c55 = sharp_mode_constant(k, 5.5);
    const double c533 = sharp_mode_constant(k, 5.33);
    const double c51 = sharp_mode_constant(k, 5.1);
    const double c49 = sharp_mode_constant(k, 4.9);
    CHECK(c55 <= 0.5 * c51);
    CHECK(c533 <= 0.5 * c51);
    CHECK(c49 > c55);
    double prev = 0;
    for (int j = 0; j <= 4; ++j) {
      const double c = sharp_mode_constant(k, 5.0 + (1.0 / 3.0) * std::pow(2.0, -j));
      CHECK(c > prev);
      prev = c;
    }
    // analytic symbol oracle: C ~ 1 / |(tau-1)^2 - 16| once the window resolves it
    CHECK(c51 == doctest::Approx(1.0 / std::abs(4.1 * 4.1 - 16.0)).epsilon(0.05));
    CHECK(c55 == doctest::Approx(1.0 / std::abs(4.5 * 4.5 - 16.0)).epsilon(0.05));
    // the degree-5 mode is resonant at 6, not at 5
    CHECK(sharp_mode_constant(5, 6.1) > 2.0 * sharp_mode_constant(5, 5.1));
  }
}

TEST_CASE("interior estimate dilation invariance") {
  WeightPhi w{0.1, 0.5};
  const double tau = 8.5;
  std::vector<double> c_imp, c_sec;
  for (double lam : {1.0, 0.5, 0.25}) {
    Grid2D g = Grid2D::centered(Vec2(0, 0), lam, 257);
    const ScalarField f =
        make_bump(BumpProfile{0.15 * lam, 0.05 * lam, 0.30 * lam, 0.05 * lam}, g, Vec2(0, 0));
    c_imp.push_back(check_carleman_interior(f, tau, w).fitted_c);
    c_sec.push_back(check_carleman_interior_secform(f, tau, w).fitted_c);
  }
  auto spread = [](const std::vector<double>& v) {
    return (*std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end())) /
           *std::min_element(v.begin(), v.end());
  };
  CHECK(spread(c_imp) <= 0.10);
  CHECK(spread(c_sec) > spread(c_imp));
  // support outside r0 is refused
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 257);
  CHECK_THROWS_AS(check_carleman_interior(annular_bump(g), tau, w), Error);

  SUBCASE("in-place dilation of a sampled field agrees") {
    Grid2D gd = Grid2D::centered(Vec2(0, 0), 1.0, 513);
    const ScalarField f = make_bump(BumpProfile{0.15, 0.05, 0.30, 0.05}, gd, Vec2(0, 0));
    const CarlemanCheckReport rep = check_carleman_interior_dilations(f, tau, w);
    CHECK(rep.extras.at("dilation_spread") <= 0.10);
    CHECK(rep.extras.at("C_lambda_1") == doctest::Approx(rep.fitted_c));
    CHECK(rep.extras.count("C_lambda_0.25") == 1);
  }
}

TEST_CASE("bilaplace estimate") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 257);
  WeightPhi w{0.1, 1.0};
  SUBCASE("finite constant, stable under refinement") {
    Grid2D g1 = Grid2D::centered(Vec2(0, 0), 2.0, 513);
    const double c1 =
        check_carleman_bilaplace(bump_times_harmonic(g1, 3), ScalarField::zeros(g1), 12.5, w)
            .fitted_c;
    Grid2D g2 = Grid2D::centered(Vec2(0, 0), 2.0, 1025);
    const double c2 =
        check_carleman_bilaplace(bump_times_harmonic(g2, 3), ScalarField::zeros(g2), 12.5, w)
            .fitted_c;
    CHECK(std::isfinite(c1));
    CHECK(c1 > 0);
    CHECK(std::abs(c1 - c2) / c2 <= 0.05);
  }
  SUBCASE("two-point tau scaling") {
    // the weighted norms concentrate at the inner support edge, where f vanishes to 5th
    // order and lap^2 f to 1st; Laplace asymptotics then give C(tau) ~ tau^-2, so the
    // tight constant shrinks toward 1/4 when tau doubles
    const ScalarField f = annular_bump(g);
    ScalarField w1 = ScalarField::sample(g, [](double, double) { return 1.0; });
    const double c_lo = check_carleman_bilaplace(f, w1, 12.5, w).fitted_c;
    const double c_hi = check_carleman_bilaplace(f, w1, 25.5, w).fitted_c;
    CHECK(c_hi / c_lo >= 0.2);
    CHECK(c_hi / c_lo <= 1.0);
  }
}

TEST_CASE("boundary estimate on the half ball") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 6.4, 257);
  const ScalarField w0 = ScalarField::zeros(g);
  WeightPsi psi{5.0, 0.1};
  SUBCASE("vanishing flat trace") {
    ScalarField v = make_bump(BumpProfile{0, 0, 1.5, 1.0}, g, Vec2(0, 0));
    for (int iy = 0; iy < g.resolution; ++iy)
      for (int ix = 0; ix < g.resolution; ++ix) v.values(ix, iy) *= g.node(ix, iy).y();
    const CarlemanCheckReport rep = check_carleman_boundary(v, w0, 10.5, psi, 3.0);
    CHECK(std::isfinite(rep.fitted_c));
    CHECK(rep.fitted_c > 0);
    // x2 * bump vanishes on the flat boundary: the trace terms for v are tiny
    CHECK(rep.terms.at("lhs.trace_v") <= 1e-10 * rep.lhs_total);
  }
  SUBCASE("nonzero trace dominates and the itemization is consistent") {
    const ScalarField v = make_bump(BumpProfile{0, 0, 1.5, 1.0}, g, Vec2(0, 0));
    const CarlemanCheckReport rep = check_carleman_boundary(v, w0, 10.5, psi, 3.0);
    double sum = 0;
    for (const auto& [k, val] : rep.terms)
      if (k.rfind("lhs.", 0) == 0) sum += val;
    CHECK(std::abs(sum - rep.lhs_total) <= 1e-10 * rep.lhs_total);
    CHECK(rep.terms.at("lhs.trace_v") > 0);
  }
  SUBCASE("support near the curved boundary is refused") {
    const ScalarField v = make_bump(BumpProfile{0, 0, 2.5, 0.6}, g, Vec2(0, 0));
    CHECK_THROWS_AS(check_carleman_boundary(v, w0, 10.5, psi, 3.0), Error);
  }
}

TEST_CASE("caccioppoli inequalities") {
  SUBCASE("interior: Re(z^3) against the closed-form power integrals") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.2, 1025);
    ScalarField u = ScalarField::sample(
        g, [](double x, double y) { return std::pow(std::complex<double>(x, y), 3).real(); });
    const ScalarField w0 = ScalarField::zeros(g);
    const CaccioppoliReport rep = check_caccioppoli_interior(u, w0, 1.0, 0.2, 0.4, 0.6, 0.8);
    // closed form: each |D^k Re z^3| is a homogeneous polynomial magnitude; integrals of
    // r^{2(3-k)} over the annuli give the exact ratio
    auto ann_int = [](double p, double a, double b) {
      // integral of r^p over the annulus, angular part folded into the constants below
      return (std::pow(b, p + 2) - std::pow(a, p + 2)) / (p + 2);
    };
    // |Re z^3|^2 averages to r^6/2 over angles; |D z^3|^2 = 9 r^4 (grad), 36 r^2 split over
    // the two second-order multi-indices... compute the exact angular constants instead:
    // D^k (x^3 - 3 x y^2): k=0: r^6 cos^2(3t); k=1: 9 r^4; k=2: (36,18?) -- use quadrature
    // on the angular factor by brute force at fixed radius.
    auto angular_ms = [&](int k) {
      // mean square over angles of |D^k u| at radius 1, by dense sampling
      const int na = 20000;
      double acc = 0;
      for (int i = 0; i < na; ++i) {
        const double t = 2 * M_PI * i / na;
        const double x = std::cos(t), y = std::sin(t);
        double v2 = 0;
        if (k == 0) {
          const double v = x * x * x - 3 * x * y * y;
          v2 = v * v;
        } else if (k == 1) {
          const double ux = 3 * x * x - 3 * y * y, uy = -6 * x * y;
          v2 = ux * ux + uy * uy;
        } else if (k == 2) {
          const double uxx = 6 * x, uxy = -6 * y, uyy = -6 * x;
          v2 = uxx * uxx + uxy * uxy + uyy * uyy;
        } else {
          const double uxxx = 6, uxxy = 0, uxyy = -6, uyyy = 0;
          v2 = uxxx * uxxx + uxxy * uxxy + uxyy * uxyy + uyyy * uyyy;
        }
        acc += v2 / na;
      }
      return acc;
    };
    // the common 2 pi angular measure cancels in the ratio
    double lhs = 0;
    for (int k = 0; k <= 3; ++k) {
      const double p = 2 * (3 - k) + 2 * k;  // r^{2(3-k)} from u, r^{2k} from the weight
      lhs += std::sqrt(angular_ms(k) * ann_int(p, 0.4, 0.6));
    }
    const double rhs = std::sqrt(angular_ms(0) * ann_int(6, 0.2, 0.8));
    const double closed = lhs / rhs;
    CHECK(rep.fitted_c == doctest::Approx(closed).epsilon(0.02));
  }
  SUBCASE("interior: zero field passes trivially") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    const CaccioppoliReport rep =
        check_caccioppoli_interior(ScalarField::zeros(g), ScalarField::zeros(g), 1.0, 0.2, 0.4,
                                   0.6, 0.8);
    CHECK(rep.lhs == 0.0);
  }
  SUBCASE("radius ordering enforced") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    CHECK_THROWS_AS(check_caccioppoli_interior(ScalarField::zeros(g), ScalarField::zeros(g), 1.0,
                                               0.4, 0.2, 0.6, 0.8),
                    Error);
  }
  SUBCASE("boundary: linear field has computable norms") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 5.0, 257);
    ScalarField u = ScalarField::sample(g, [](double, double y) { return y; });
    const ScalarField w0 = ScalarField::zeros(g);
    const CaccioppoliReport rep = check_caccioppoli_boundary(u, w0, 1.0);
    // u = y: grad = (0,1), hess = 0, lap = 0; trace data: d_nu u = 1 on the segment
    // lhs = ||1||_{L2(B+_{1/2})} = sqrt(pi/8); rhs = H^2 norm of the constant 1 on [-2,2]
    const double lhs_exact = std::sqrt(M_PI / 8.0);
    CHECK(rep.lhs == doctest::Approx(lhs_exact).epsilon(0.02));
    CHECK(rep.terms.at("rhs.cauchy_data") == doctest::Approx(2.0).epsilon(0.02));
    CHECK(rep.fitted_c == doctest::Approx(rep.lhs / rep.rhs).epsilon(1e-12));
  }
  SUBCASE("boundary: stable under refinement") {
    auto run = [](int res) {
      Grid2D g = Grid2D::centered(Vec2(0, 0), 5.0, res);
      ScalarField u = ScalarField::sample(
          g, [](double x, double y) { return std::sin(M_PI * x) * std::sin(M_PI * y); });
      ScalarField w =
          ScalarField::sample(g, [](double, double) { return 4 * std::pow(M_PI, 4); });
      return check_caccioppoli_boundary(u, w, 1.0).fitted_c;
    };
    const double a = run(257), b = run(513);
    CHECK(std::abs(a - b) / b <= 0.10);
  }
}

TEST_CASE("propagation of smallness") {
  SUBCASE("kappa from the explicit formulas at s = 5, b_n = 0.1") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 5.0, 129);
    ScalarField u = ScalarField::sample(g, [](double, double y) { return y; });
    const PropagationReport rep =
        check_propagation(u, ScalarField::zeros(g), 5.0, 0.1, 1.0);
    // independent algebraic route: p0 = e^{-s(1+bn)} (1 - e^{-s/3})
    const double p0_oracle = std::exp(-5.5) * (1.0 - std::exp(-5.0 / 3.0));
    const double p1_oracle = -std::expm1(-5.5);
    CHECK(std::abs(rep.p0 - p0_oracle) <= 1e-12);
    CHECK(std::abs(rep.p1 - p1_oracle) <= 1e-12);
    CHECK(std::abs(rep.p0 - 0.003314) <= 1e-6);
    CHECK(std::abs(rep.p1 - 0.995913) <= 1e-6);
    CHECK(std::abs(rep.kappa - 0.99668) <= 1e-5);
    CHECK(rep.kappa == doctest::Approx(p1_oracle / (p1_oracle + p0_oracle)).epsilon(1e-12));
  }
  SUBCASE("kappa in (0,1) over a parameter sweep") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 5.0, 129);
    ScalarField u = ScalarField::sample(g, [](double x, double y) { return 1 + x + y; });
    for (double s : {1.0, 5.0, 20.0})
      for (double bn : {0.01, 0.1, 0.5}) {
        const PropagationReport rep = check_propagation(u, ScalarField::zeros(g), s, bn, 1.0);
        CHECK(rep.p0 > 0);
        CHECK(rep.p1 > 0);
        CHECK(rep.kappa > 0);
        CHECK(rep.kappa < 1);
      }
  }
  SUBCASE("zero field: inequality is 0 <= 0") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 5.0, 129);
    const PropagationReport rep =
        check_propagation(ScalarField::zeros(g), ScalarField::zeros(g), 5.0, 0.1, 1.0);
    CHECK(rep.interior_small == 0.0);
    CHECK_FALSE(rep.violation_candidate);
  }
}
