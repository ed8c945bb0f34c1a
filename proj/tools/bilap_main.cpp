// Command-line front end: generate solutions, run individual checks, or drive the
// whole verification suite.  Exit codes: 0 all pass, 2 at least one failed check,
// 1 operational error.
#include <CLI11.hpp>
#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>

#include "bilap/bump.hpp"
#include "bilap/carleman.hpp"
#include "bilap/field_io.hpp"
#include "bilap/interpolate.hpp"
#include "bilap/nodal.hpp"
#include "bilap/simplex.hpp"
#include "bilap/suite.hpp"

using json = nlohmann::json;
using namespace bilap;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) fail(Err::Io, "cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

SolutionSpec spec_from_json(const std::string& text) {
  json j = json::parse(text);
  SolutionSpec s;
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "harmonic-polynomial") s.family = Family::HarmonicPolynomial;
  else if (fam == "sine-product") s.family = Family::SineProduct;
  else if (fam == "exponential") s.family = Family::Exponential;
  else fail(Err::BadSpec, "unknown family '" + fam + "'");
  if (j.contains("params")) {
    const json& p = j["params"];
    if (p.contains("k")) s.k = p["k"].get<int>();
    if (p.contains("real_part")) s.real_part = p["real_part"].get<bool>();
    if (p.contains("a")) s.a = p["a"].get<double>();
    if (p.contains("b")) s.b = p["b"].get<double>();
    if (p.contains("mu")) {
      auto mu = p["mu"].get<std::vector<double>>();
      if (mu.size() != 2) fail(Err::BadSpec, "mu needs two components");
      s.mu = Vec2(mu[0], mu[1]);
    }
  }
  if (j.contains("domain")) {
    auto d = j["domain"].get<std::vector<double>>();
    if (d.size() != 4) fail(Err::BadSpec, "domain needs [x0,y0,x1,y1]");
    if (std::abs((d[2] - d[0]) - (d[3] - d[1])) > 1e-12)
      fail(Err::BadSpec, "domain must be square");
    s.domain = Cube{Vec2(d[0], d[1]), d[2] - d[0]};
  }
  if (j.contains("resolution")) s.resolution = j["resolution"].get<int>();
  return s;
}

ScalarField load_field_arg(const std::string& path, double ox, double oy) {
  return load_nlf1(path, Vec2(ox, oy));
}

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json carleman_report_json(const CarlemanCheckReport& r) {
  json terms = json::object();
  for (const auto& [k, v] : r.terms) terms[k] = v;
  return json{{"inequality", r.inequality},
              {"tau", r.tau},
              {"terms", terms},
              {"lhs", r.lhs_total},
              {"rhs", r.rhs_total},
              {"fitted_C", r.fitted_c},
              {"vacuous", r.vacuous},
              {"flags",
               {{"quantized", r.tau_flags.quantized},
                {"dist_to_integer", r.tau_flags.dist_to_integer},
                {"magnitude_ok", r.tau_flags.magnitude_ok}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bilap: numerical laboratory for nodal sets of bi-Laplace solutions"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", spec_path, field_path;
  uint64_t seed = 20240817;
  int resolution = 0;
  double origin_x = 0, origin_y = 0;

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "sample an analytic solution family");
  gen->add_option("--spec", spec_path, "solution spec JSON")->required();
  gen->add_option("--out", out_dir, "output directory");
  gen->callback([&] {
    SolutionSpec s = spec_from_json(read_file(spec_path));
    AnalyticSolution sol = generate_analytic(s);
    std::filesystem::create_directories(out_dir);
    save_nlf1(sol.u, out_dir + "/u.nlf1");
    save_nlf1(sol.w, out_dir + "/w.nlf1");
    print_json(json{{"family", family_name(s.family)},
                    {"M", sol.m_bound},
                    {"files", {"u.nlf1", "w.nlf1"}},
                    {"origin", {sol.u.grid.origin.x(), sol.u.grid.origin.y()}},
                    {"resolution", sol.u.grid.resolution}});
  });

  // solve ------------------------------------------------------------------
  auto* slv = app.add_subcommand("solve", "boundary-value solve of Delta^2 u = W u");
  std::string w_path;
  double w_const = 0.0;
  std::vector<double> dom{-1, -1, 1, 1};
  int solve_res = 129;
  slv->add_option("--potential-nlf1", w_path, "W field (NLF1); overrides --potential");
  slv->add_option("--potential", w_const, "constant W");
  slv->add_option("--domain", dom, "x0 y0 x1 y1 (square)")->expected(4);
  slv->add_option("--resolution", solve_res, "grid nodes per axis");
  slv->add_option("--out", out_dir, "output directory");
  slv->add_option("--seed", seed, "boundary-data seed");
  slv->callback([&] {
    Grid2D g(Vec2(dom[0], dom[1]), dom[2] - dom[0], solve_res);
    ScalarField w = w_path.empty()
                        ? ScalarField::sample(g, [&](double, double) { return w_const; })
                        : load_field_arg(w_path, dom[0], dom[1]);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const double c0 = uni(rng), c1 = uni(rng), c2 = uni(rng), d0 = uni(rng);
    BvpProblem prob{w, [&](double x, double y) { return c0 + c1 * x + c2 * y; },
                    [&](double, double) { return d0; }};
    auto [u, rep] = solve_bilaplace_bvp(prob);
    std::filesystem::create_directories(out_dir);
    save_nlf1(u, out_dir + "/solution.nlf1");
    print_json(json{{"unknowns", rep.unknowns},
                    {"method", rep.method},
                    {"linear_residual", rep.linear_residual},
                    {"pde_residual", rep.pde_residual},
                    {"contraction_ok", rep.contraction_ok}});
  });

  // doubling ---------------------------------------------------------------
  auto* dbl = app.add_subcommand("doubling", "doubling index and monotonicity margins");
  double px = 0, py = 0, pr = 0.1, pt = 0, pdelta = 0.05;
  dbl->add_option("--field", field_path, "field (NLF1)")->required();
  dbl->add_option("--origin-x", origin_x, "grid origin x");
  dbl->add_option("--origin-y", origin_y, "grid origin y");
  dbl->add_option("--x", px, "center x");
  dbl->add_option("--y", py, "center y");
  dbl->add_option("--r", pr, "radius");
  dbl->add_option("--t", pt, "also report monotonicity margins at this t (> 2)");
  dbl->add_option("--delta", pdelta, "monotonicity delta");
  dbl->callback([&] {
    ScalarField u = load_field_arg(field_path, origin_x, origin_y);
    DoublingReport rep = doubling_index(u, Vec2(px, py), pr);
    json j{{"center", {rep.center.x(), rep.center.y()}},
           {"radius", rep.radius},
           {"sup_r", rep.sup_r},
           {"sup_2r", rep.sup_2r},
           {"N", rep.index}};
    if (pt > 2) {
      MonotonicityRecord m = check_monotonicity(u, Vec2(px, py), pr, pt, pdelta, 0.0);
      j["monotonicity"] = json{{"t", m.t},          {"ratio", m.ratio},
                               {"N_at_R", m.n_at_r}, {"N_at_tR", m.n_at_tr},
                               {"c_lo", m.c_lo},     {"c_hi", m.c_hi},
                               {"lower_plain", m.lower_plain},
                               {"upper_plain", m.upper_plain}};
    }
    print_json(j);
  });

  // threeball ----------------------------------------------------------------
  auto* tb = app.add_subcommand("threeball", "three-ball interpolation inequality");
  double tb_t = 6, tb_delta = 0.05, tb_eps = 0.1;
  tb->add_option("--field", field_path, "field (NLF1)")->required();
  tb->add_option("--origin-x", origin_x, "grid origin x");
  tb->add_option("--origin-y", origin_y, "grid origin y");
  tb->add_option("--x", px, "center x");
  tb->add_option("--y", py, "center y");
  tb->add_option("--r", pr, "inner radius R");
  tb->add_option("--t", tb_t, "outer factor t");
  tb->add_option("--delta", tb_delta, "delta");
  tb->add_option("--eps", tb_eps, "weight eps");
  tb->callback([&] {
    ScalarField u = load_field_arg(field_path, origin_x, origin_y);
    ThreeBallRecord rec = check_three_ball(u, Vec2(px, py), pr, tb_t, tb_delta, tb_eps);
    print_json(json{{"radius", rec.radius},
                    {"theta", rec.theta},
                    {"beta1", rec.beta1},
                    {"beta2", rec.beta2},
                    {"norms", {rec.norm_inner, rec.norm_mid, rec.norm_outer}},
                    {"fitted_C", rec.fitted_c},
                    {"scale_condition", rec.scale_condition}});
  });

  // carleman -----------------------------------------------------------------
  auto* car = app.add_subcommand("carleman", "weighted inequality checks on bump test fields");
  std::string which = "lap";
  double tau = 5.5, car_eps = 0.1, car_s = 5.0, car_bn = 0.1;
  int car_res = 257;
  car->add_option("--check", which, "lap | interior | interior-sec | bilap | boundary");
  car->add_option("--tau", tau, "Carleman parameter");
  car->add_option("--eps", car_eps, "weight eps");
  car->add_option("--s", car_s, "boundary weight s");
  car->add_option("--b-n", car_bn, "boundary weight offset");
  car->add_option("--resolution", car_res, "grid nodes per axis");
  car->callback([&] {
    if (which == "boundary") {
      Grid2D g = Grid2D::centered(Vec2(0, 0), 6.4, car_res);
      ScalarField bump = make_bump(BumpProfile{0, 0, 1.5, 1.0}, g, Vec2(0, 0));
      ScalarField v = bump;
      for (int iy = 0; iy < g.resolution; ++iy)
        for (int ix = 0; ix < g.resolution; ++ix) v.values(ix, iy) *= g.node(ix, iy).y();
      print_json(carleman_report_json(check_carleman_boundary(
          v, ScalarField::zeros(g), tau, WeightPsi{car_s, car_bn}, 3.0)));
      return;
    }
    Grid2D g = Grid2D::centered(Vec2(0, 0), 2.0, car_res);
    ScalarField bump = make_bump(BumpProfile{0.2, 0.1, 0.55, 0.15}, g, Vec2(0, 0));
    if (which == "lap") {
      ScalarField f = ScalarField::sample(g, [](double x, double y) {
        return std::pow(std::complex<double>(x, y), 5).real();
      });
      f.values *= bump.values;
      print_json(carleman_report_json(check_carleman_laplace(f, tau)));
    } else if (which == "interior" || which == "interior-sec") {
      Grid2D gs = Grid2D::centered(Vec2(0, 0), 1.0, std::max(car_res, 513));
      ScalarField f = make_bump(BumpProfile{0.15, 0.05, 0.30, 0.05}, gs, Vec2(0, 0));
      WeightPhi w{car_eps, 0.5};
      if (which == "interior") {
        const CarlemanCheckReport rep = check_carleman_interior_dilations(f, tau, w);
        json j = carleman_report_json(rep);
        for (const auto& [k, v] : rep.extras) j["extras"][k] = v;
        print_json(j);
      } else {
        print_json(carleman_report_json(check_carleman_interior_secform(f, tau, w)));
      }
    } else if (which == "bilap") {
      print_json(carleman_report_json(check_carleman_bilaplace(
          bump, ScalarField::zeros(g), tau, WeightPhi{car_eps, 1.0})));
    } else {
      fail(Err::UnknownCheck, "carleman --check must be lap|interior|interior-sec|bilap|boundary");
    }
  });

  // nodal ----------------------------------------------------------------
  auto* nod = app.add_subcommand("nodal", "extract the zero set inside a cube");
  std::vector<double> cube_arg{-1, -1, 2};
  nod->add_option("--field", field_path, "field (NLF1)")->required();
  nod->add_option("--origin-x", origin_x, "grid origin x");
  nod->add_option("--origin-y", origin_y, "grid origin y");
  nod->add_option("--cube", cube_arg, "lo_x lo_y side")->expected(3);
  nod->add_option("--out", out_dir, "output directory");
  nod->callback([&] {
    ScalarField u = load_field_arg(field_path, origin_x, origin_y);
    NodalSet s = extract_nodal_set(u, Cube{Vec2(cube_arg[0], cube_arg[1]), cube_arg[2]});
    std::filesystem::create_directories(out_dir);
    std::ofstream seg(out_dir + "/segments.csv");
    seg << "x1,y1,x2,y2\n";
    json poly = json::array();
    for (const NodalSegment& sg : s.segments) {
      seg << sg.a.x() << "," << sg.a.y() << "," << sg.b.x() << "," << sg.b.y() << "\n";
      poly.push_back(json::array({sg.a.x(), sg.a.y(), sg.b.x(), sg.b.y()}));
    }
    std::ofstream pj(out_dir + "/polylines.json");
    pj << json{{"segments", poly}}.dump() << "\n";
    print_json(json{{"segments", s.segments.size()}, {"total_length", s.total_length}});
  });

  // partition ----------------------------------------------------------------
  auto* par = app.add_subcommand("partition", "hyperplane / bad-cube subdivision checks");
  std::string mode = "hyperplane";
  int a_param = 8;
  double n0 = 2.0, c_param = 0.05;
  par->add_option("--field", field_path, "field (NLF1)")->required();
  par->add_option("--origin-x", origin_x, "grid origin x");
  par->add_option("--origin-y", origin_y, "grid origin y");
  par->add_option("--cube", cube_arg, "lo_x lo_y side")->expected(3);
  par->add_option("--mode", mode, "hyperplane | badcube");
  par->add_option("--A", a_param, "subdivision parameter");
  par->add_option("--n0", n0, "index floor N0");
  par->add_option("--c", c_param, "gain constant c");
  par->add_option("--out", out_dir, "output directory for the per-subcube table");
  par->callback([&] {
    ScalarField u = load_field_arg(field_path, origin_x, origin_y);
    const Cube q{Vec2(cube_arg[0], cube_arg[1]), cube_arg[2]};
    PartitionReport rep = mode == "hyperplane"
                              ? hyperplane_lemma_check(u, q, a_param, -1.0, n0)
                              : bad_cube_count(u, q, a_param, n0, c_param);
    std::filesystem::create_directories(out_dir);
    std::ofstream csv(out_dir + "/subcubes.csv");
    csv << "i,j,lo_x,lo_y,side,N,above_threshold\n";
    for (const SubcubeIndexRow& r : rep.rows)
      csv << r.i << "," << r.j << "," << r.cube.lo.x() << "," << r.cube.lo.y() << ","
          << r.cube.side << "," << r.n_value << "," << (r.above_threshold ? 1 : 0) << "\n";
    print_json(json{{"mode", mode},
                    {"N_of_Q", rep.n_of_q},
                    {"threshold", rep.threshold},
                    {"min_row_value", rep.min_row_value},
                    {"count_above", rep.count_above},
                    {"gated", rep.gated},
                    {"pass", rep.pass},
                    {"subcube_table", out_dir + "/subcubes.csv"}});
  });

  // simplex --------------------------------------------------------------
  auto* sim = app.add_subcommand("simplex", "simplex metrics and the covering fact");
  std::vector<double> verts{0, 0, 1, 0, 0.5, 0.8};
  double k_cover = 4.0, tau_hat = 0.05;
  int samples = 100000;
  sim->add_option("--vertices", verts, "x1 y1 x2 y2 x3 y3")->expected(6);
  sim->add_option("--K", k_cover, "covering radius factor");
  sim->add_option("--tau-hat", tau_hat, "covering enlargement");
  sim->add_option("--samples", samples, "low-discrepancy sample count");
  sim->callback([&] {
    SimplexGeometry s = simplex_metrics(Vec2(verts[0], verts[1]), Vec2(verts[2], verts[3]),
                                        Vec2(verts[4], verts[5]));
    CoveringCheck chk = simplex_covering_check(s, k_cover, tau_hat, samples);
    print_json(json{{"diam", s.diam},
                    {"width", s.width},
                    {"relative_width", s.relative_width},
                    {"barycenter", {s.barycenter.x(), s.barycenter.y()}},
                    {"covering_pass", chk.pass},
                    {"failures", chk.failures},
                    {"worst_excess", chk.worst_excess},
                    {"second_fact_pass", chk.second_fact_pass}});
  });

  // bound ------------------------------------------------------------------
  auto* bnd = app.add_subcommand("bound", "recursion and the global nodal bound ledger");
  double bn_n = 10, bn_n0 = 1, bn_a = 10, bn_c = 0.1, bn_m = 16, bn_cover = 1, bn_f0 = 1;
  bnd->add_option("--N", bn_n, "doubling bound N");
  bnd->add_option("--N0", bn_n0, "base N0");
  bnd->add_option("--A", bn_a, "subdivision A");
  bnd->add_option("--c", bn_c, "gain c");
  bnd->add_option("--M", bn_m, "potential bound M");
  bnd->add_option("--cover", bn_cover, "covering constant");
  bnd->add_option("--F0", bn_f0, "base value F(N0)");
  bnd->callback([&] {
    const double closed = nodal_bound_recursion(bn_n, bn_n0, bn_a, bn_c, bn_f0);
    const double loop = nodal_bound_recursion_loop(bn_n, bn_n0, bn_a, bn_c, bn_f0);
    const BoundLedger lg = assemble_global_bound(bn_m, bn_a, bn_c, bn_cover, bn_n0, bn_f0);
    print_json(json{{"F_closed", closed},
                    {"F_loop", loop},
                    {"alpha0", lg.alpha0},
                    {"beta", lg.beta},
                    {"bound", lg.bound}});
  });

  // suite ------------------------------------------------------------------
  auto* sui = app.add_subcommand("suite", "run the verification suite");
  sui->add_option("--config", config_path, "config JSON");
  sui->add_option("--out", out_dir, "output directory");
  sui->add_option("--seed", seed, "seed override");
  sui->add_option("--resolution", resolution, "resolution override");
  sui->callback([&] {
    ExperimentConfig cfg = default_full_config();
    if (!config_path.empty()) cfg = config_from_json(read_file(config_path));
    if (sui->count("--out")) cfg.out_dir = out_dir;
    if (sui->count("--seed")) cfg.seed = seed;
    if (sui->count("--resolution")) cfg.resolution = resolution;
    RunManifest man = run_suite(cfg);
    std::cout << "suite: " << man.passes << " pass, " << man.fails << " fail, " << man.flags
              << " flag; manifest " << cfg.out_dir << "/manifest.json\n";
    std::exit(man.exit_code);
  });

  // describe -----------------------------------------------------------------
  auto* des = app.add_subcommand("describe", "explain what a check verifies");
  std::string check_id;
  des->add_option("id", check_id, "check id")->required();
  des->callback([&] {
    const std::string text = describe_check(check_id);
    std::cout << check_id << ": " << text << "\n";
  });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
