#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "bilap/nodal.hpp"
#include "bilap/simplex.hpp"
#include "bilap/solutions.hpp"

using namespace bilap;

TEST_CASE("nodal extraction oracles") {
  SUBCASE("linear field: the line x = 0") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 513);
    ScalarField u = ScalarField::sample(g, [](double x, double) { return x; });
    const NodalSet s = extract_nodal_set(u, Cube::centered(Vec2(0, 0), 2.0));
    CHECK(std::abs(s.total_length - 2.0) <= 2 * g.h());
    for (const NodalSegment& sg : s.segments) {
      CHECK(std::abs(sg.a.x()) <= 1e-9);
      CHECK(std::abs(sg.b.x()) <= 1e-9);
    }
  }
  SUBCASE("Re(z^3): three clipped lines, length 2 + 8/sqrt(3)") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 513);
    ScalarField u = ScalarField::sample(
        g, [](double x, double y) { return std::pow(std::complex<double>(x, y), 3).real(); });
    const NodalSet s = extract_nodal_set(u, Cube::centered(Vec2(0, 0), 2.0));
    CHECK(std::abs(s.total_length - (2.0 + 8.0 / std::sqrt(3.0))) <= 0.05);
  }
  SUBCASE("sine grid: interior cross only, boundary lines dropped") {
    Grid2D g(Vec2(0, 0), 1.0, 513);
    ScalarField u = ScalarField::sample(
        g, [](double x, double y) { return std::sin(2 * M_PI * x) * std::sin(2 * M_PI * y); });
    const NodalSet s = extract_nodal_set(u, Cube{Vec2(0, 0), 1.0});
    CHECK(std::abs(s.total_length - 2.0) <= 4 * g.h());
  }
  SUBCASE("identically zero field raises") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    CHECK_THROWS_AS(extract_nodal_set(ScalarField::zeros(g), Cube::centered(Vec2(0, 0), 1.0)),
                    Error);
  }
  SUBCASE("sign equivariance") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // smooth random field: a few random plane waves, no exact node zeros
    std::vector<std::array<double, 4>> waves;
    for (int i = 0; i < 6; ++i)
      waves.push_back({gauss(rng), gauss(rng), gauss(rng), 3.0 * gauss(rng)});
    ScalarField u = ScalarField::sample(g, [&](double x, double y) {
      double v = 0.1;
      for (const auto& w : waves) v += w[0] * std::sin(w[3] * (w[1] * x + w[2] * y) + w[0]);
      return v;
    });
    ScalarField nu = u;
    nu.values = -u.values;
    const Cube q = Cube::centered(Vec2(0, 0), 1.6);
    const NodalSet a = extract_nodal_set(u, q);
    const NodalSet b = extract_nodal_set(nu, q);
    REQUIRE(a.segments.size() == b.segments.size());
    CHECK(a.total_length == doctest::Approx(b.total_length).epsilon(1e-12));
    auto key = [](const NodalSegment& s) {
      const bool swap = s.a.x() > s.b.x() || (s.a.x() == s.b.x() && s.a.y() > s.b.y());
      const Vec2 p = swap ? s.b : s.a;
      const Vec2 q2 = swap ? s.a : s.b;
      return std::array<double, 4>{p.x(), p.y(), q2.x(), q2.y()};
    };
    std::vector<std::array<double, 4>> ka, kb;
    for (const auto& s : a.segments) ka.push_back(key(s));
    for (const auto& s : b.segments) kb.push_back(key(s));
    std::sort(ka.begin(), ka.end());
    std::sort(kb.begin(), kb.end());
    for (size_t i = 0; i < ka.size(); ++i)
      for (int c = 0; c < 4; ++c) CHECK(ka[i][c] == doctest::Approx(kb[i][c]).epsilon(1e-12));
  }
  SUBCASE("length estimator converges O(h) on the dense sine grid") {
    std::vector<double> errs;
    for (int res : {129, 257, 513}) {
      Grid2D g(Vec2(0, 0), 1.0, res);
      ScalarField u = ScalarField::sample(
          g, [](double x, double y) { return std::sin(8 * M_PI * x) * std::sin(8 * M_PI * y); });
      errs.push_back(std::abs(extract_nodal_set(u, Cube{Vec2(0, 0), 1.0}).total_length - 14.0));
    }
    const double rate = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(rate >= 0.8);
    CHECK(rate <= 1.2);
  }
  SUBCASE("hausdorff_length sums segments") {
    NodalSet s;
    CHECK(hausdorff_length(s) == 0.0);
    s.segments.push_back({Vec2(0, 0), Vec2(1, 0)});
    s.segments.push_back({Vec2(0, 1), Vec2(0, 2)});
    CHECK(hausdorff_length(s) == doctest::Approx(2.0));
  }
}

TEST_CASE("partition") {
  const Cube q{Vec2(0, 0), 1.0};
  SUBCASE("16 subcubes of side 1/4") {
    const auto cubes = partition(q, 4);
    CHECK(cubes.size() == 16);
    for (const Cube& c : cubes) CHECK(c.side == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("(2A+1)^2 subcubes") {
    CHECK(partition(q, 9).size() == 81);
  }
  SUBCASE("tiling identity") {
    for (int per : {2, 3, 7, 16}) {
      const auto cubes = partition(q, per);
      double area = 0;
      for (const Cube& c : cubes) area += c.side * c.side;
      CHECK(area == doctest::Approx(1.0).epsilon(1e-12));
      // corners meet exactly
      CHECK(cubes.back().hi().x() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("hyperplane lemma check") {
  SUBCASE("constant field: all indices zero") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    ScalarField u = ScalarField::sample(g, [](double, double) { return 1.0; });
    const PartitionReport rep = hyperplane_lemma_check(u, Cube::centered(Vec2(0, 0), 1.0), 4, -1);
    CHECK(rep.pass);
    CHECK(rep.min_row_value <= 1e-9);
  }
  SUBCASE("Re(z^4) centered on the line: off-center subcubes decay") {
    SolutionSpec spec;
    spec.family = Family::HarmonicPolynomial;
    spec.k = 4;
    spec.domain = Cube::centered(Vec2(0, 0), 2.0);
    spec.resolution = 513;
    ScalarField u = generate_analytic(spec).u;
    const PartitionReport rep =
        hyperplane_lemma_check(u, Cube::centered(Vec2(0, 0), 0.8), 12, 4.2);
    CHECK(rep.pass);
    CHECK(rep.min_row_value <= 2.1);
  }
}

TEST_CASE("bad cube count") {
  SUBCASE("constant field: count zero") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    ScalarField u = ScalarField::sample(g, [](double, double) { return 1.0; });
    const PartitionReport rep = bad_cube_count(u, Cube::centered(Vec2(0, 0), 1.0), 8, 2.0, 0.05);
    CHECK(rep.count_above == 0);
    CHECK(rep.pass);
  }
  SUBCASE("Re(z^6): high index localizes at the center") {
    SolutionSpec spec;
    spec.family = Family::HarmonicPolynomial;
    spec.k = 6;
    spec.domain = Cube::centered(Vec2(0, 0), 2.0);
    spec.resolution = 513;
    ScalarField u = generate_analytic(spec).u;
    const PartitionReport rep =
        bad_cube_count(u, Cube::centered(Vec2(0, 0), 0.8), 16, 2.0, 0.05);
    CHECK(rep.count_above <= 8);
    CHECK(rep.pass);
  }
}

TEST_CASE("simplex metrics") {
  SUBCASE("collinear: width zero") {
    const SimplexGeometry s = simplex_metrics(Vec2(0, 0), Vec2(1, 0), Vec2(2, 0));
    CHECK(s.width == 0.0);
    CHECK(s.relative_width == 0.0);
  }
  SUBCASE("equilateral side 1") {
    const SimplexGeometry s =
        simplex_metrics(Vec2(0, 0), Vec2(1, 0), Vec2(0.5, std::sqrt(3.0) / 2));
    CHECK(s.diam == doctest::Approx(1.0));
    CHECK(s.width == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
    CHECK(s.relative_width == doctest::Approx(0.8660254).epsilon(1e-6));
  }
  SUBCASE("barycenter is the vertex average") {
    const SimplexGeometry s = simplex_metrics(Vec2(0, 0), Vec2(1, 0), Vec2(0, 1));
    CHECK(s.barycenter.x() == doctest::Approx(1.0 / 3));
    CHECK(s.barycenter.y() == doctest::Approx(1.0 / 3));
  }
  SUBCASE("relative width invariant under rigid motion and scaling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> uni(-1, 1);
    for (int i = 0; i < 50; ++i) {
      const Vec2 a(uni(rng), uni(rng)), b(uni(rng), uni(rng)), c(uni(rng), uni(rng));
      const double w0 = simplex_metrics(a, b, c).relative_width;
      const double th = uni(rng) * M_PI;
      const double sc = 0.1 + 3.0 * std::abs(uni(rng));
      Eigen::Rotation2D<double> rot(th);
      const Vec2 t(uni(rng), uni(rng));
      auto tr = [&](const Vec2& p) { return Vec2(sc * (rot * p) + t); };
      const double w1 = simplex_metrics(tr(a), tr(b), tr(c)).relative_width;
      CHECK(std::abs(w0 - w1) <= 1e-12);
    }
  }
}

TEST_CASE("simplex covering fact") {
  SUBCASE("equilateral, K = 4, tau_hat = 0.05 passes") {
    const SimplexGeometry s =
        simplex_metrics(Vec2(0.2, 0.2), Vec2(1.2, 0.2), Vec2(0.7, 0.2 + std::sqrt(3.0) / 2));
    const CoveringCheck chk = simplex_covering_check(s, 4.0, 0.05, 100000);
    CHECK(chk.pass);
    CHECK(chk.second_fact_pass);
  }
  SUBCASE("thin simplex with oversized tau_hat fails") {
    const SimplexGeometry s = simplex_metrics(Vec2(0, 0), Vec2(1, 0), Vec2(0.5, 0.066));
    // w about 0.1, K = 2/gamma = 20, tau_hat = 1 is far too large
    const CoveringCheck chk = simplex_covering_check(s, 20.0, 1.0, 100000);
    CHECK_FALSE(chk.pass);
  }
  SUBCASE("tau_hat = 0 with K = 4 passes for moderate shapes") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> uni(0, 1);
    int tried = 0;
    while (tried < 10) {
      const SimplexGeometry s = simplex_metrics(Vec2(uni(rng), uni(rng)),
                                                Vec2(uni(rng), uni(rng)),
                                                Vec2(uni(rng), uni(rng)));
      if (s.relative_width < 0.2) continue;
      ++tried;
      const CoveringCheck chk = simplex_covering_check(s, 4.0, 0.0, 20000);
      CHECK(chk.pass);
    }
  }
}

TEST_CASE("simplex doubling lemma") {
  SolutionSpec spec;
  spec.family = Family::HarmonicPolynomial;
  spec.k = 5;
  spec.domain = Cube::centered(Vec2(0, 0), 2.0);
  spec.resolution = 513;
  ScalarField u = generate_analytic(spec).u;
  SUBCASE("centered on the singular point: vacuous margin, not failure") {
    const double d = 0.01;
    const SimplexGeometry s = simplex_metrics(Vec2(-d / 2, -d / 3), Vec2(d / 2, -d / 3),
                                              Vec2(0, d * 0.66));
    SimplexLemmaParams params;
    params.n0 = 1.0;
    const SimplexLemmaReport rep = simplex_lemma_check(u, s, 0.3, params);
    CHECK(rep.verdict != SimplexVerdict::Fail);
  }
  SUBCASE("off the singular point: strict gain") {
    const double d = 0.02;
    const Vec2 c(0.055, 0.0);  // simplex sits beside the singularity
    const SimplexGeometry s = simplex_metrics(c + Vec2(-d / 2, -d / 3), c + Vec2(d / 2, -d / 3),
                                              c + Vec2(0, d * 0.66));
    SimplexLemmaParams params;
    params.big_k = 4.0;
    params.big_c = 8.0;
    params.c = 0.05;
    params.n0 = 1.0;
    const SimplexLemmaReport rep = simplex_lemma_check(u, s, 0.3, params);
    CHECK(rep.verdict == SimplexVerdict::Pass);
    CHECK(rep.margin > 0);
  }
  SUBCASE("below the N0 gate: skipped") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    ScalarField c1 = ScalarField::sample(g, [](double, double) { return 1.0; });
    const SimplexGeometry s = simplex_metrics(Vec2(0, 0), Vec2(0.02, 0), Vec2(0.01, 0.017));
    SimplexLemmaParams params;
    params.n0 = 1.0;
    const SimplexLemmaReport rep = simplex_lemma_check(c1, s, 0.3, params);
    CHECK(rep.verdict == SimplexVerdict::Skipped);
  }
}

TEST_CASE("recursion and global bound") {
  SUBCASE("base case") {
    CHECK(nodal_bound_recursion(0.5, 1.0, 10, 0.1, 3.0) == 3.0);
    CHECK(nodal_bound_recursion(1.0, 1.0, 10, 0.1, 3.0) == doctest::Approx(3.0));
  }
  SUBCASE("exact power case: N = N0 (1+c)^3 gives (2A)^3 F0") {
    const double n = 1.0 * std::pow(1.1, 3);
    CHECK(nodal_bound_recursion_loop(n, 1.0, 10, 0.1, 1.0) == doctest::Approx(8000.0));
    CHECK(nodal_bound_recursion(n, 1.0, 10, 0.1, 1.0) == doctest::Approx(8000.0).epsilon(1e-9));
  }
  SUBCASE("loop vs closed form within one factor of 2A") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uni(0, 1);
    for (int i = 0; i < 500; ++i) {
      const double n0 = 0.5 + 4 * uni(rng);
      const double n = n0 * std::pow(10.0, 2.5 * uni(rng));
      const double a = 2 + 18 * uni(rng);
      const double c = 0.02 + 1.5 * uni(rng);
      const double loop = nodal_bound_recursion_loop(n, n0, a, c, 1.0);
      const double closed = nodal_bound_recursion(n, n0, a, c, 1.0);
      const double q = loop / closed;
      CHECK(q <= 2 * a * (1 + 1e-9));
      CHECK(q >= 1.0 / (2 * a) * (1 - 1e-9));
    }
  }
  SUBCASE("alpha0 and beta arithmetic") {
    const BoundLedger lg = assemble_global_bound(16.0, 10.0, 0.1, 1.0);
    CHECK(lg.alpha0 == doctest::Approx(31.4312).epsilon(1e-4));
    CHECK(lg.beta == doctest::Approx(31.4312 / 3 + 0.25).epsilon(1e-4));
    CHECK(assemble_global_bound(1.0, 10.0, 0.1, 7.0).bound == doctest::Approx(7.0));
    for (double a : {2.0, 5.0, 40.0})
      for (double c : {0.01, 0.5, 2.0}) CHECK(assemble_global_bound(4.0, a, c, 1.0).beta > 0.25);
  }
}

TEST_CASE("scaling exponent fit") {
  SUBCASE("sine family slope 1/4") {
    std::vector<std::pair<double, double>> pts;
    for (int m : {1, 2, 4, 8}) {
      const double a = m * M_PI;
      pts.push_back({4 * std::pow(a, 4), 2.0 * m});  // exact line count
    }
    const SlopeFit fit = scaling_exponent_fit(pts);
    CHECK(fit.slope == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("constant lengths give slope zero") {
    const SlopeFit fit = scaling_exponent_fit({{1.0, 2.0}, {10.0, 2.0}, {100.0, 2.0}});
    CHECK(fit.slope == doctest::Approx(0.0));
  }
  SUBCASE("repeated M values allowed, degenerate spread rejected") {
    CHECK_NOTHROW(scaling_exponent_fit({{1.0, 2.0}, {1.0, 2.1}, {50.0, 3.0}}));
    CHECK_THROWS_AS(scaling_exponent_fit({{1.0, 2.0}, {1.0, 2.1}, {2.0, 3.0}}), Error);
    CHECK_THROWS_AS(scaling_exponent_fit({{1.0, 2.0}, {10.0, 2.1}}), Error);
  }
}
