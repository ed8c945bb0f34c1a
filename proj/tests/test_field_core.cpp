#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <random>

#include "bilap/bump.hpp"
#include "bilap/fd.hpp"
#include "bilap/field_io.hpp"
#include "bilap/interpolate.hpp"
#include "bilap/norms.hpp"

using namespace bilap;

namespace {
ScalarField constant_field(const Grid2D& g, double c) {
  return ScalarField::sample(g, [c](double, double) { return c; });
}
}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS_AS(Grid2D(Vec2(0, 0), 1.0, 4), Error);   // even
  CHECK_THROWS_AS(Grid2D(Vec2(0, 0), 1.0, 1), Error);   // too small
  CHECK_THROWS_AS(Grid2D(Vec2(0, 0), -1.0, 9), Error);  // bad extent
  Grid2D g(Vec2(-1, -1), 2.0, 129);
  CHECK(g.h() == doctest::Approx(2.0 / 128));
  // center node exists
  CHECK(g.node(64, 64).x() == doctest::Approx(0.0));
}

TEST_CASE("sup_norm oracles") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.2, 257);
  SUBCASE("constant field on any ball") {
    CHECK(sup_norm(constant_field(g, 1.0), Region(Ball{Vec2(0, 0), 0.7})) == 1.0);
  }
  SUBCASE("linear field attains max at the ball boundary") {
    ScalarField u = ScalarField::sample(g, [](double x, double) { return x; });
    Grid2D g257 = Grid2D::centered(Vec2(0, 0), 2.2, 257);
    const double s = sup_norm(u, Region(Ball{Vec2(0, 0), 1.0}));
    CHECK(std::abs(s - 1.0) <= 2 * g257.h());
  }
  SUBCASE("degree-2 homogeneity forces sup = r^2") {
    Grid2D g513 = Grid2D::centered(Vec2(0, 0), 2.0, 513);
    ScalarField u = ScalarField::sample(g513, [](double x, double y) { return x * x - y * y; });
    const double s = sup_norm(u, Region(Ball{Vec2(0, 0), 0.5}));
    CHECK(std::abs(s - 0.25) <= 4 * g513.h());
  }
  SUBCASE("empty region raises") {
    CHECK_THROWS_AS(sup_norm(constant_field(g, 1.0), Region(Ball{Vec2(50, 50), 0.1})), Error);
  }
}

TEST_CASE("l2_norm oracles") {
  SUBCASE("unit square") {
    Grid2D g(Vec2(0, 0), 1.0, 257);
    const double n = l2_norm(constant_field(g, 1.0), Region(Cube{Vec2(0, 0), 1.0}));
    CHECK(std::abs(n - 1.0) <= 3 * g.h());
  }
  SUBCASE("disk area gives sqrt(pi)") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.02, 513);
    const double n = l2_norm(constant_field(g, 1.0), Region(Ball{Vec2(0, 0), 1.0}));
    CHECK(n == doctest::Approx(std::sqrt(M_PI)).epsilon(0.01 / std::sqrt(M_PI)));
  }
  SUBCASE("integral of x^2 over the unit square is 1/3") {
    Grid2D g(Vec2(0, 0), 1.0, 513);
    ScalarField u = ScalarField::sample(g, [](double x, double) { return x; });
    const double n = l2_norm(u, Region(Cube{Vec2(0, 0), 1.0}));
    CHECK(std::abs(n - 1.0 / std::sqrt(3.0)) <= 0.005);
  }
  SUBCASE("monotone under region inclusion") {
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
    ScalarField u = ScalarField::sample(g, [](double x, double y) { return std::sin(3 * x + y); });
    const double small = l2_norm(u, Region(Ball{Vec2(0, 0), 0.4}));
    const double big = l2_norm(u, Region(Ball{Vec2(0, 0), 0.8}));
    CHECK(small <= big);
  }
}

TEST_CASE("norm scaling properties") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
  ScalarField u =
      ScalarField::sample(g, [](double x, double y) { return std::sin(2 * x) + 0.3 * y; });
  const Region ball{Ball{Vec2(0.1, -0.2), 0.5}};
  const double s0 = sup_norm(u, ball), l0 = l2_norm(u, ball);
  ScalarField neg = u, scaled = u;
  neg.values = -u.values;
  scaled.values = 3.5 * u.values;
  CHECK(sup_norm(neg, ball) == s0);
  CHECK(l2_norm(neg, ball) == l0);
  CHECK(sup_norm(scaled, ball) == doctest::Approx(3.5 * s0).epsilon(1e-14));
  CHECK(l2_norm(scaled, ball) == doctest::Approx(3.5 * l0).epsilon(1e-14));
}

TEST_CASE("derivatives") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 257);
  SUBCASE("second difference exact on quadratics") {
    ScalarField u = ScalarField::sample(g, [](double x, double) { return x * x; });
    ScalarField d = derivative(u, {2, 0});
    for (int i = 40; i < 60; ++i) CHECK(d.values(i, 77) == doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("laplacian of x^2 + y^2 is 4 exactly") {
    ScalarField u = ScalarField::sample(g, [](double x, double y) { return x * x + y * y; });
    ScalarField dxx = derivative(u, {2, 0});
    ScalarField dyy = derivative(u, {0, 2});
    CHECK(dxx.values(100, 100) + dyy.values(100, 100) == doctest::Approx(4.0).epsilon(1e-10));
    ScalarField l5 = laplacian5(u);
    CHECK(l5.values(100, 100) == doctest::Approx(4.0).epsilon(1e-10));
  }
  SUBCASE("central difference Taylor remainder on sin") {
    ScalarField u = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
    ScalarField d = derivative(u, {1, 0});
    const int i0 = 128;  // x = 0 node
    CHECK(g.node(i0, 0).x() == doctest::Approx(0.0));
    const double h = g.h();
    CHECK(std::abs(d.values(i0, 30) - 1.0) <= h * h / 6.0 * 1.01 + 1e-15);
  }
  SUBCASE("linearity is exact") {
    ScalarField a = ScalarField::sample(g, [](double x, double y) { return std::sin(x + 2 * y); });
    ScalarField b = ScalarField::sample(g, [](double x, double y) { return std::cos(3 * x - y); });
    ScalarField sum = a;
    sum.values = a.values + 2.0 * b.values;
    ScalarField d_sum = derivative(sum, {1, 1});
    ScalarField da = derivative(a, {1, 1});
    ScalarField db = derivative(b, {1, 1});
    const int m = d_sum.invalid_margin;
    for (int iy = m; iy < g.resolution - m; iy += 17)
      for (int ix = m; ix < g.resolution - m; ix += 17)
        CHECK(d_sum.values(ix, iy) ==
              doctest::Approx(da.values(ix, iy) + 2.0 * db.values(ix, iy)).epsilon(1e-12));
  }
  SUBCASE("order above 4 rejected") {
    ScalarField u = constant_field(g, 1.0);
    CHECK_THROWS_AS(derivative(u, {3, 2}), Error);
  }
  SUBCASE("margin is enforced by norms") {
    ScalarField u = ScalarField::sample(g, [](double x, double y) { return x * y; });
    ScalarField d = derivative(u, {1, 1});
    CHECK_THROWS_AS(l2_norm(d, Region(Cube{g.origin, g.extent})), Error);
    CHECK_NOTHROW(l2_norm(d, Region(Ball{Vec2(0, 0), 0.5})));
  }
}

TEST_CASE("weighted_l2 oracles") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.02, 513);
  ScalarField one = constant_field(g, 1.0);
  const Region ann{Annulus{Vec2(0, 0), 0.5, 1.0}};
  SUBCASE("identity weight equals l2") {
    const double a = weighted_l2(one, [](const Vec2&) { return 1.0; }, 0, Vec2(0, 0), ann);
    CHECK(a == doctest::Approx(l2_norm(one, ann)).epsilon(1e-13));
  }
  SUBCASE("weight 1/r on the annulus: sqrt(2 pi ln 2)") {
    // integral of r^-2 over the annulus = 2 pi ln 2
    const double v = weighted_l2(
        one, [](const Vec2& p) { return 1.0 / p.norm(); }, 0, Vec2(0, 0), ann);
    CHECK(std::abs(v - std::sqrt(2 * M_PI * std::log(2.0))) <= 0.02);
  }
  SUBCASE("weight 1/r^2 on the annulus: sqrt(3 pi)") {
    const double v = weighted_l2(
        one, [](const Vec2& p) { return std::pow(p.norm(), -2.0); }, 0, Vec2(0, 0), ann);
    CHECK(std::abs(v - std::sqrt(3 * M_PI)) <= 0.03);
  }
  SUBCASE("weight 1/r with radial power 1 reduces to the annulus area") {
    const double v = weighted_l2(
        one, [](const Vec2& p) { return 1.0 / p.norm(); }, 1, Vec2(0, 0), ann);
    CHECK(std::abs(v - std::sqrt(M_PI * 0.75)) <= 0.02);
  }
  SUBCASE("singular weight is refused with the node named") {
    const Region ball{Ball{Vec2(0, 0), 0.5}};
    CHECK_THROWS_WITH_AS(
        weighted_l2(one, [](const Vec2& p) { return 1.0 / p.norm(); }, 0, Vec2(0, 0), ball),
        doctest::Contains("not finite"), Error);
  }
}

TEST_CASE("weight identity e^{tau phi} = r^-tau e^{tau r^eps}") {
  const double eps = 0.1, tau = 8.5;
  for (double r : {0.05, 0.21, 0.49}) {
    const double phi = -std::log(r) + std::pow(r, eps);
    const double a = std::exp(tau * phi);
    const double b = std::pow(r, -tau) * std::exp(tau * std::pow(r, eps));
    CHECK(std::abs(a - b) / b <= 1e-12);
    CHECK(a / std::pow(r, -tau) >= 1.0);
    CHECK(a / std::pow(r, -tau) <= std::exp(tau * std::pow(0.5, eps)));
  }
}

TEST_CASE("bump profiles") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 513);
  BumpProfile p{0.2, 0.1, 0.6, 0.1};
  SUBCASE("plateau and support") {
    ScalarField eta = make_bump(p, g, Vec2(0, 0));
    CHECK(bump_value(p, 0.45) == 1.0);
    CHECK(bump_value(p, 0.75) == 0.0);
    CHECK(bump_value(p, 0.1) == 0.0);
    const int c = 256;
    CHECK(eta.values(c, c) == 0.0);  // inside the inner zero radius
  }
  SUBCASE("sampled gradient bound: C <= 4 over ramp width 0.1") {
    ScalarField eta = make_bump(p, g, Vec2(0, 0));
    ScalarField grad = gradient_magnitude(eta);
    double max_grad = 0;
    for (int iy = 4; iy < 509; ++iy)
      for (int ix = 4; ix < 509; ++ix) max_grad = std::max(max_grad, grad.values(ix, iy));
    CHECK(max_grad <= 4.0 / 0.1);
    // analytic ramp bound: max |p'| = 630/256
    CHECK(ramp_derivative_bounds()[1] == doctest::Approx(630.0 / 256.0));
    CHECK(max_grad <= ramp_derivative_bounds()[1] / 0.1 * 1.02);
  }
  SUBCASE("under-resolved ramp rejected") {
    Grid2D coarse = Grid2D::centered(Vec2(0, 0), 2.0, 65);
    BumpProfile thin{0.2, 0.05, 0.6, 0.1};
    CHECK_THROWS_AS(make_bump(thin, coarse, Vec2(0, 0)), Error);
  }
  SUBCASE("C4 ramp endpoints") {
    CHECK(ramp_c4(0.0) == 0.0);
    CHECK(ramp_c4(1.0) == 1.0);
    CHECK(ramp_c4_derivative(0.5) == doctest::Approx(630.0 / 256.0));
  }
}

TEST_CASE("field io") {
  Grid2D g(Vec2(-0.5, -0.5), 1.0, 65);
  ScalarField u = ScalarField::sample(g, [](double x, double y) { return x * y + 0.25 * x; });
  const std::string dir = std::filesystem::temp_directory_path().string();
  SUBCASE("nlf1 round trip preserves values and geometry") {
    const std::string path = dir + "/bilap_test_field.nlf1";
    save_nlf1(u, path);
    ScalarField v = load_nlf1(path, g.origin);
    CHECK(v.grid.resolution == g.resolution);
    CHECK(v.grid.extent == doctest::Approx(g.extent));
    CHECK((v.values - u.values).abs().maxCoeff() == 0.0);
    std::filesystem::remove(path);
  }
  SUBCASE("csv round trip") {
    const std::string path = dir + "/bilap_test_field.csv";
    save_csv(u, path);
    ScalarField v = load_csv(path);
    CHECK(v.grid.resolution == g.resolution);
    CHECK((v.values - u.values).abs().maxCoeff() <= 1e-15);
    CHECK(v.grid.origin.x() == doctest::Approx(g.origin.x()));
    std::filesystem::remove(path);
  }
  SUBCASE("bad magic raises") {
    const std::string path = dir + "/bilap_bad_magic.nlf1";
    std::ofstream os(path, std::ios::binary);
    os << "XXXXgarbage";
    os.close();
    CHECK_THROWS_AS(load_nlf1(path), Error);
    std::filesystem::remove(path);
  }
}

TEST_CASE("bicubic interpolation reproduces cubics") {
  Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, 129);
  ScalarField u = ScalarField::sample(
      g, [](double x, double y) { return x * x * x - 3 * x * y * y + 0.5 * y; });
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-0.9, 0.9);
  for (int i = 0; i < 200; ++i) {
    const double x = uni(rng), y = uni(rng);
    const double exact = x * x * x - 3 * x * y * y + 0.5 * y;
    CHECK(sample_bicubic(u, Vec2(x, y)) == doctest::Approx(exact).epsilon(1e-10));
  }
  CHECK_THROWS_AS(sample_bicubic(u, Vec2(1.5, 0)), Error);
}
