// Acceptance suite: one pass/fail line per criterion, exit 0 only when all
// pass. Optional argv: criterion numbers to run (default: all).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "capdens/density.hpp"
#include "capdens/distance.hpp"
#include "capdens/errors.hpp"
#include "capdens/predicates.hpp"
#include "capdens/sets.hpp"
#include "capdens/solver.hpp"
#include "support/direct_capacity.hpp"

using namespace capdens;

namespace {

struct Outcome {
  int id;
  std::string title;
  bool pass;
  std::string detail;
  double seconds;
};

std::vector<Outcome> outcomes;

class Check {
 public:
  Check(int id, std::string title) : id_(id), title_(std::move(title)) {
    start_ = std::chrono::steady_clock::now();
  }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      if (!detail_.empty()) detail_ += "; ";
      detail_ += what;
    }
  }
  void note(const std::string& what) {
    if (!detail_.empty()) detail_ += "; ";
    detail_ += what;
  }
  ~Check() {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    outcomes.push_back({id_, title_, pass_, detail_, secs});
    std::printf("%s criterion %2d: %s (%.1f s)%s%s\n", pass_ ? "PASS" : "FAIL", id_,
                title_.c_str(), secs, detail_.empty() ? "" : " -- ", detail_.c_str());
    std::fflush(stdout);
  }

 private:
  int id_;
  std::string title_;
  bool pass_ = true;
  std::string detail_;
  std::chrono::steady_clock::time_point start_;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

SpaceSpec box_space(std::vector<std::array<double, 2>> bounds) {
  SpaceSpec s;
  s.shape = EuclideanBox{std::move(bounds)};
  return s;
}

SpaceSpec slit_space(int slit_count = 4) {
  SpaceSpec s;
  s.shape = SlitSpace{2, slit_count};
  return s;
}

// half-cell offset lattice: no node sits exactly on the plate circles
MetricGraph offset_square(double radius_hull, double h) {
  const double half = radius_hull + 8.5 * h;
  return build_graph(box_space({{-half, half}, {-half, half}}),
                     Box{{{-half, half}, {-half, half}}}, h);
}

double radial_cap_2d(double a, double b) { return 2.0 * std::numbers::pi / std::log(b / a); }

struct AnnulusSets {
  NodeSet E;
  NodeSet omega;
};

AnnulusSets annulus_sets(const MetricGraph& g) {
  return {rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0)),
          rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 2.0))};
}

void criterion1() {
  Check c(1, "radial capacity oracle at h=1/64, refining");
  const double exact = radial_cap_2d(1.0, 2.0);
  const auto t0 = std::chrono::steady_clock::now();
  const auto g64 = offset_square(2.0, 1.0 / 64);
  const auto s64 = annulus_sets(g64);
  SolverConfig cfg;
  const double v64 = variational_capacity(g64, s64.E, s64.omega, cfg).value;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double e64 = std::fabs(v64 - exact) / exact;
  c.require(e64 <= 0.03, "h=1/64 error " + num(e64) + " > 3%");
  c.require(secs < 30.0, "h=1/64 runtime " + num(secs) + " s >= 30 s");

  const auto g128 = offset_square(2.0, 1.0 / 128);
  const auto s128 = annulus_sets(g128);
  const double v128 = variational_capacity(g128, s128.E, s128.omega, cfg).value;
  const double e128 = std::fabs(v128 - exact) / exact;
  c.require(e128 < e64, "error did not decrease under refinement");
  c.note("cap=" + num(v64) + " err64=" + num(e64) + " err128=" + num(e128));
}

void criterion2() {
  Check c(2, "superlevel capacity identity across p and M");
  const std::vector<double> ps = {1.5, 2.0, 3.0};
  const std::vector<double> ms = {0.25, 0.5, 0.75};
  double worst64 = 0.0, worst128 = 0.0;
  for (int refine = 0; refine < 2; ++refine) {
    const double h = refine == 0 ? 1.0 / 64 : 1.0 / 128;
    const auto g = offset_square(2.0, h);
    const auto sets = annulus_sets(g);
    for (double p : ps) {
      SolverConfig cfg;
      cfg.p = p;
      const auto base = variational_capacity(g, sets.E, sets.omega, cfg);
      for (double M : ms) {
        const auto em = superlevel_set(g, base.potential, M, /*strict=*/true);
        std::vector<double> init(base.potential.values.size());
        for (std::size_t i = 0; i < init.size(); ++i)
          init[i] = std::min(base.potential.values[i] / M, 1.0);
        const auto capm = variational_capacity(g, em, sets.omega, cfg, &init);
        const double ratio = capm.value / base.value;
        const double expected = std::pow(M, 1.0 - p);
        const double err = std::fabs(ratio - expected) / expected;
        if (refine == 0) {
          worst64 = std::max(worst64, err);
          c.require(err <= 0.05,
                    "p=" + num(p) + " M=" + num(M) + " error " + num(err) + " > 5%");
        } else {
          worst128 = std::max(worst128, err);
        }
      }
    }
  }
  c.require(worst128 < worst64, "max error did not shrink at h=1/128");
  c.note("max err64=" + num(worst64) + " err128=" + num(worst128));
}

void criterion3() {
  Check c(3, "half-ball capacity deficiency");
  double ratios[2];
  for (int refine = 0; refine < 2; ++refine) {
    const double h = refine == 0 ? 1.0 / 64 : 1.0 / 128;
    const auto g = offset_square(2.0, h);
    const auto sets = annulus_sets(g);
    const auto half = rasterize_set(g, SetSpec::make_lower_half_ball({0.0, 0.0}, 1.0));
    SolverConfig cfg;
    const double full = variational_capacity(g, sets.E, sets.omega, cfg).value;
    const double lower = variational_capacity(g, half, sets.omega, cfg).value;
    ratios[refine] = lower / full;
  }
  c.require(ratios[0] <= 0.97, "ratio " + num(ratios[0]) + " > 0.97 at h=1/64");
  c.require(std::fabs(ratios[0] - ratios[1]) <= 0.02,
            "refinement moved the ratio by " + num(std::fabs(ratios[0] - ratios[1])));
  c.note("ratio64=" + num(ratios[0]) + " ratio128=" + num(ratios[1]));
}

void criterion4() {
  Check c(4, "slit-space adversarial density vs plain region");
  const double h = 1.0 / 16;
  const double r = 4.25;  // R_2 + delta
  DensityParams params;
  params.r = r;
  params.tau = 2.0;
  params.solver = SolverConfig{};

  const auto adv_graph = build_graph(
      slit_space(), Box{{{7.375, 24.625}, {-8.625, 8.625}}}, h);
  const auto E_adv = rasterize_set(adv_graph, SetSpec::make_lattice_balls(1.0, 0.25, true));
  const int32_t x2 = adv_graph.nearest_node(std::vector<double>{16.0, 0.0});
  params.centers.explicit_nodes = {x2};
  const auto adv = density_scan(adv_graph, E_adv, params);

  const auto plain_graph = build_graph(
      slit_space(), Box{{{7.375, 24.625}, {-28.625, -11.375}}}, h);
  const auto E_plain = rasterize_set(plain_graph, SetSpec::make_lattice_balls(1.0, 0.25, true));
  const int32_t xp = plain_graph.nearest_node(std::vector<double>{16.0, -20.0});
  params.centers.explicit_nodes = {xp};
  const auto plain = density_scan(plain_graph, E_plain, params);

  c.require(adv.min_ratio <= 0.97, "adversarial ratio " + num(adv.min_ratio) + " > 0.97");
  c.require(plain.min_ratio >= adv.min_ratio + 0.15,
            "plain ratio " + num(plain.min_ratio) + " not 0.15 above adversarial " +
                num(adv.min_ratio));
  c.note("adv=" + num(adv.min_ratio) + " plain=" + num(plain.min_ratio));
}

const MetricGraph& big_plain_graph() {
  static const MetricGraph g = build_graph(
      box_space({{-65.0, 65.0}, {-65.0, 65.0}}), Box{{{-65.0, 65.0}, {-65.0, 65.0}}}, 0.125);
  return g;
}

void criterion5() {
  Check c(5, "inner-metric density trend for the lattice-ball set");
  const auto& g = big_plain_graph();
  const auto E = rasterize_set(g, SetSpec::make_lattice_balls(1.0, 0.25, false));
  DensityParams params;
  params.tau = 2.0;
  params.metric = Metric::inner;
  params.solver = SolverConfig{};
  params.solver.tol = 1e-6;
  params.centers.explicit_nodes = {g.nearest_node(std::vector<double>{0.0, 0.0}),
                                   g.nearest_node(std::vector<double>{0.5, 0.5}),
                                   g.nearest_node(std::vector<double>{0.25, -0.75})};
  std::vector<double> ladder;
  for (double R : {4.0, 8.0, 16.0, 32.0}) {
    params.r = R;
    const auto scan = density_scan(g, E, params);
    ladder.push_back(scan.min_ratio);
  }
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    c.require(ladder[i] >= ladder[i - 1] - 0.02,
              "D_in dropped from " + num(ladder[i - 1]) + " to " + num(ladder[i]));
  }
  c.require(ladder.back() > 0.5, "D_in(32) = " + num(ladder.back()) + " <= 0.5");
  c.note("D_in ladder " + num(ladder[0]) + ", " + num(ladder[1]) + ", " + num(ladder[2]) +
         ", " + num(ladder[3]));
}

void criterion6() {
  Check c(6, "whole-space capacity density bracket for the M=10 lattice");
  const double h = 0.25;
  const auto g = build_graph(box_space({{-109.0, 109.0}, {-109.0, 109.0}}),
                             Box{{{-109.0, 109.0}, {-109.0, 109.0}}}, h);
  const auto E = rasterize_set(g, SetSpec::make_lattice_balls(10.0, 1.0, false));
  SolverConfig cfg;
  cfg.tol = 1e-6;
  const std::vector<int32_t> centers = {g.nearest_node(std::vector<double>{0.0, 0.0}),
                                        g.nearest_node(std::vector<double>{5.0, 5.0}),
                                        g.nearest_node(std::vector<double>{2.0, 7.0})};
  const auto scan = sobolev_density_scan(g, E, 100.0, centers, cfg);
  const double lo = 0.5 / 1600.0;
  const double hi = 2.0 * 0.72;
  c.require(scan.min_ratio >= lo && scan.min_ratio <= hi,
            "minimum " + num(scan.min_ratio) + " outside [" + num(lo) + ", " + num(hi) + "]");
  c.note("min=" + num(scan.min_ratio));
}

struct RandomCondenser {
  MetricGraph graph;
  NodeSet E;
  NodeSet omega;
  NodeSet A;
};

RandomCondenser random_condenser(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> side(1.6, 2.4);
  const double lx = side(rng), ly = side(rng);
  const double h = std::max(lx, ly) / 40.0;
  auto g = build_graph(box_space({{0.0, lx}, {0.0, ly}}), Box{{{0.0, lx}, {0.0, ly}}}, h);
  const double cx = lx / 2, cy = ly / 2;
  const double rmax = 0.5 * std::min(lx, ly) - 3.0 * h;
  std::uniform_real_distribution<double> rball(0.12, 0.26);
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  const double r_omega = rmax;
  const double r_e = rball(rng) * std::min(lx, ly);
  const double ex = cx + jitter(rng), ey = cy + jitter(rng);
  const double ax = cx + jitter(rng) * 2.0, ay = cy + jitter(rng) * 2.0;
  const double r_a = rball(rng) * 0.8 * std::min(lx, ly);
  auto omega = rasterize_set(g, SetSpec::make_ball({cx, cy}, r_omega));
  auto E = rasterize_set(g, SetSpec::make_ball({ex, ey}, r_e)).set_intersection(omega);
  auto A = rasterize_set(g, SetSpec::make_ball({ax, ay}, r_a)).set_intersection(omega);
  return {std::move(g), std::move(E), std::move(omega), std::move(A)};
}

void criterion7() {
  Check c(7, "potential infimum bound on random condensers");
  std::mt19937_64 rng(20240811);
  const std::vector<double> ps = {1.5, 2.0, 3.0};
  int checked = 0;
  double worst_margin = kInf;
  for (int i = 0; i < 51; ++i) {
    auto inst = random_condenser(rng);
    if (inst.E.empty() || inst.A.empty()) continue;
    SolverConfig cfg;
    cfg.p = ps[i % 3];
    const auto ue = capacitary_potential(inst.graph, inst.E, inst.omega, cfg);
    const double cap_e = variational_capacity(inst.graph, inst.E, inst.omega, cfg).value;
    const double cap_a = variational_capacity(inst.graph, inst.A, inst.omega, cfg).value;
    double inf_a = 1.0;
    for (int32_t v : inst.A) inf_a = std::min(inf_a, ue.values[v]);
    const double bound = std::pow(cap_e / cap_a, 1.0 / (cfg.p - 1.0)) + 1e-6;
    worst_margin = std::min(worst_margin, bound - inf_a);
    if (inf_a > bound) {
      c.require(false, "violated at instance " + std::to_string(i) + ": inf " + num(inf_a) +
                           " > bound " + num(bound));
    }
    ++checked;
  }
  c.require(checked >= 50, "only " + std::to_string(checked) + " instances checked");
  c.note(std::to_string(checked) + " instances, min slack " + num(worst_margin));
}

void criterion8() {
  Check c(8, "comparison principle on nested configurations");
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  const std::vector<double> ps = {1.5, 2.0, 3.0};
  int checked = 0;
  double worst = -kInf;
  for (int i = 0; i < 20; ++i) {
    auto inst = random_condenser(rng);
    const auto gc = inst.graph.node_coords(inst.graph.nearest_node(
        std::vector<double>{inst.graph.box.bounds[0][1] / 2, inst.graph.box.bounds[1][1] / 2}));
    const double cx = gc[0] + jitter(rng), cy = gc[1] + jitter(rng);
    const double rv = 0.35 * std::min(inst.graph.box.bounds[0][1], inst.graph.box.bounds[1][1]);
    const auto V =
        rasterize_set(inst.graph, SetSpec::make_ball({cx, cy}, rv)).set_intersection(inst.omega);
    const auto eprime =
        rasterize_set(inst.graph, SetSpec::make_ball({cx, cy}, rv * 0.4)).set_intersection(V);
    auto E = eprime.set_union(inst.E.set_difference(V));
    if (eprime.empty() || E.empty() || V.size() == inst.omega.size()) continue;
    SolverConfig cfg;
    cfg.p = ps[i % 3];
    const auto ue = capacitary_potential(inst.graph, E, inst.omega, cfg);
    const auto up = capacitary_potential(inst.graph, eprime, V, cfg);
    const auto layer = eps_neighborhood(inst.graph, V, 1.5 * inst.graph.h, Metric::ambient)
                           .set_difference(V);
    double a = 0.0;
    for (int32_t v : layer) a = std::max(a, 1.0 - ue.values[v]);
    for (int32_t v : V) {
      const double lhs = 1.0 - ue.values[v];
      const double rhs = a * (1.0 - up.values[v]) + 1e-6;
      worst = std::max(worst, lhs - rhs);
      if (lhs > rhs) {
        c.require(false, "violated at instance " + std::to_string(i));
        break;
      }
    }
    ++checked;
  }
  c.require(checked >= 20, "only " + std::to_string(checked) + " instances checked");
  c.note(std::to_string(checked) + " instances, max lhs-rhs " + num(worst));
}

void criterion9() {
  Check c(9, "iterative capacity equals the direct sparse solve at p=2");
  std::mt19937_64 rng(4242);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    auto inst = random_condenser(rng);
    if (inst.E.empty()) continue;
    SolverConfig cfg;
    const double iterative = variational_capacity(inst.graph, inst.E, inst.omega, cfg).value;
    const double direct = capdens_test::direct_capacity_p2(inst.graph, inst.E, inst.omega);
    const double rel = std::fabs(iterative - direct) / direct;
    worst = std::max(worst, rel);
    c.require(rel <= 1e-6,
              "instance " + std::to_string(i) + " relative gap " + num(rel) + " > 1e-6");
  }
  c.note("max relative gap " + num(worst));
}

void criterion10() {
  Check c(10, "property suites: max principle, set/domain monotonicity, sandwiches");
  std::mt19937_64 rng(99);
  const std::vector<double> ps = {1.5, 2.0, 3.0};
  // maximum principle + monotonicity battery
  for (int i = 0; i < 9; ++i) {
    auto inst = random_condenser(rng);
    if (inst.E.empty() || inst.A.empty()) continue;
    SolverConfig cfg;
    cfg.p = ps[i % 3];
    const double slack = 1.0 + 10.0 * cfg.tol;
    const auto ue = capacitary_potential(inst.graph, inst.E, inst.omega, cfg);
    for (double v : ue.values) {
      if (!(v >= 0.0 && v <= 1.0)) {
        c.require(false, "maximum principle violated");
        break;
      }
    }
    const double cap_e = variational_capacity(inst.graph, inst.E, inst.omega, cfg).value;
    const double cap_union =
        variational_capacity(inst.graph, inst.E.set_union(inst.A), inst.omega, cfg).value;
    const double cap_a = variational_capacity(inst.graph, inst.A, inst.omega, cfg).value;
    c.require(cap_e <= cap_union * slack, "monotonicity in E failed");
    c.require(cap_union <= (cap_e + cap_a) * slack, "subadditivity failed");
    const auto omega_small = eps_interior(inst.graph, inst.omega, 2.1 * inst.graph.h,
                                          Metric::ambient);
    if (inst.E.set_union(inst.A).is_subset_of(omega_small)) {
      const double cap_small =
          variational_capacity(inst.graph, inst.E, omega_small, cfg).value;
      c.require(cap_e <= cap_small * slack, "antitonicity in Omega failed");
    }
  }
  // ball sandwich on plain and slit geometry
  {
    const auto plain = build_graph(box_space({{-2.0, 2.0}, {-2.0, 2.0}}),
                                   Box{{{-2.0, 2.0}, {-2.0, 2.0}}}, 1.0 / 16);
    const auto slit = build_graph(slit_space(1), Box{{{1.0, 7.0}, {-2.5, 1.5}}}, 1.0 / 16);
    for (const auto* g : {&plain, &slit}) {
      const auto est = quasiconvexity_estimate(*g, 50, 31);
      for (int k = 0; k < 5; ++k) {
        const int32_t center = (k * 7919) % g->node_count();
        const auto dist = inner_distance_field(*g, NodeSet({center}));
        for (double r : {0.5, 1.0}) {
          const auto bin = ball_nodes(*g, dist, r);
          const auto amb = ball_nodes(*g, center, r, Metric::ambient);
          const auto bin_l = ball_nodes(*g, dist, est.L * r + g->h * (1.0 + std::sqrt(2.0)));
          c.require(bin.is_subset_of(amb), "B_in not inside B");
          c.require(amb.is_subset_of(bin_l), "B not inside B_in(L r)");
        }
      }
    }
  }
  // eps interior / neighborhood monotonicity on a random union of balls
  {
    const auto g = build_graph(box_space({{-2.0, 2.0}, {-2.0, 2.0}}),
                               Box{{{-2.0, 2.0}, {-2.0, 2.0}}}, 1.0 / 16);
    std::uniform_real_distribution<double> pos(-1.2, 1.2), rad(0.3, 0.8);
    for (int i = 0; i < 5; ++i) {
      const auto U = rasterize_set(
          g, SetSpec::make_union({SetSpec::make_ball({pos(rng), pos(rng)}, rad(rng)),
                                  SetSpec::make_ball({pos(rng), pos(rng)}, rad(rng))}));
      if (U.empty()) continue;
      for (Metric m : {Metric::ambient, Metric::inner}) {
        const auto in1 = eps_interior(g, U, 0.1, m);
        const auto in2 = eps_interior(g, U, 0.2, m);
        const auto nb1 = eps_neighborhood(g, U, 0.1, m);
        const auto nb2 = eps_neighborhood(g, U, 0.2, m);
        c.require(in2.is_subset_of(in1) && in1.is_subset_of(U), "interior monotonicity failed");
        c.require(U.is_subset_of(nb1) && nb1.is_subset_of(nb2),
                  "neighborhood monotonicity failed");
      }
    }
  }
}

void criterion11() {
  Check c(11, "john bounds: geodesic balls, corkscrew link, cosine strip");
  // geodesic ball at h = 1/64
  {
    const double h = 1.0 / 64;
    const auto g = build_graph(box_space({{-1.25, 1.25}, {-1.25, 1.25}}),
                               Box{{{-1.25, 1.25}, {-1.25, 1.25}}}, h);
    const auto disk = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0));
    const auto est = john_lower_bound(g, disk, g.nearest_node(std::vector<double>{0.0, 0.0}),
                                      256);
    c.require(est.min_constant >= 0.9,
              "geodesic ball john bound " + num(est.min_constant) + " < 0.9");
    c.note("ball c=" + num(est.min_constant));
  }
  // john => corkscrew on certified instances
  {
    const auto g = build_graph(box_space({{-1.6, 1.6}, {-1.6, 1.6}}),
                               Box{{{-1.6, 1.6}, {-1.6, 1.6}}}, 1.0 / 32);
    const std::vector<SetSpec> shapes = {
        SetSpec::make_ball({0.0, 0.0}, 1.2),
        SetSpec::make_box({{-1.0, 1.0}, {-0.8, 0.8}}),
        SetSpec::make_intersection(
            {SetSpec::make_ball({-0.4, 0.0}, 1.1), SetSpec::make_ball({0.4, 0.0}, 1.1)}),
    };
    const std::vector<std::vector<double>> centers = {{0.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}};
    for (std::size_t i = 0; i < shapes.size(); ++i) {
      const auto U = rasterize_set(g, shapes[i]);
      const auto est = john_lower_bound(g, U, g.nearest_node(centers[i]), 128);
      CorkscrewParams params;
      params.r_min = 4 * g.h;
      params.r_max = set_diameter(g, U);
      params.x_stride_cells = 4;
      const auto profile = corkscrew_profile(g, U, params);
      c.require(profile.min_kappa >= est.min_constant * est.min_constant / 4.0 - 0.05,
                "instance " + std::to_string(i) + ": kappa " + num(profile.min_kappa) +
                    " below c^2/4 - 0.05 with c=" + num(est.min_constant));
    }
  }
  // cosine strip: no large John domain with constant above the zigzag limit
  {
    const double h = 0.25;
    SpaceSpec s;
    s.shape = CosineStrip{-8.5, 59.5};
    const auto g = build_graph(s, Box{{{-8.5, 59.5}, {-1.625, 1.625}}}, h);
    const auto U = rasterize_set(g, SetSpec::make_box({{0.0, 51.0}, {-1.625, 1.625}}));
    c.require(set_diameter(g, U) >= 50.0, "strip domain diameter below 50");
    double best = 0.0;
    for (const auto& center : {std::vector<double>{25.5, 1.0}, std::vector<double>{12.5, 0.95},
                               std::vector<double>{38.5, 0.95}}) {
      const auto est = john_lower_bound(g, U, g.nearest_node(center), 512);
      best = std::max(best, est.min_constant);
    }
    c.require(best <= 0.96, "strip john bound " + num(best) + " > 0.96");
    c.note("strip best c=" + num(best));
  }
}

void criterion12() {
  Check c(12, "uniform inner approximation: plain balls vs slit balls");
  SolverConfig cfg;
  cfg.tol = 1e-6;
  // plain geometry: rho-interior of a large inner ball keeps >= 0.9 of capacity
  const auto& g = big_plain_graph();
  const int32_t x = g.nearest_node(std::vector<double>{0.5, 0.5});
  const auto dist = inner_distance_field(g, NodeSet({x}));
  const auto U = ball_nodes(g, dist, 32.0);
  const auto omega = ball_nodes(g, dist, 64.0);
  const auto curve = inner_approx_curve(g, U, omega, {1.0}, cfg);
  const double plain_ratio = curve.rows[0].ratio;
  c.require(plain_ratio >= 0.9, "plain ratio " + num(plain_ratio) + " < 0.9");

  // slit geometry: ordinary-ball ladder stays deficient
  double worst_slit = 0.0;
  const int js[2] = {1, 2};
  for (int j : js) {
    const double xj = std::pow(4.0, j);
    const double rj = std::pow(2.0, j);
    const double outer = 2.0 * (rj + 1.0);
    const double hx = 1.0 / 32;
    const auto gs = build_graph(slit_space(),
                                Box{{{xj - outer - 4 * hx, xj + outer + 4 * hx},
                                     {-outer - 4 * hx, outer + 4 * hx}}},
                                hx);
    StabilityProbeParams params;
    params.family = ProbeFamily::ordinary_balls;
    params.members = {{gs.nearest_node(std::vector<double>{xj, 0.0}), rj}};
    params.rho = 1.0;
    params.tau = 2.0;
    params.solver = cfg;
    const auto probe = stability_probe(gs, params);
    const double ratio = probe.rows[0].ratio;
    worst_slit = std::max(worst_slit, ratio);
    c.require(ratio <= 0.97, "slit j=" + std::to_string(j) + " ratio " + num(ratio) + " > 0.97");
  }
  c.require(plain_ratio - worst_slit >= 0.05,
            "curves separate by " + num(plain_ratio - worst_slit) + " < 0.05");
  c.note("plain=" + num(plain_ratio) + " worst slit=" + num(worst_slit));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  auto want = [&](int id) { return only.empty() || only.count(id) > 0; };

  try {
    if (want(1)) criterion1();
    if (want(2)) criterion2();
    if (want(3)) criterion3();
    if (want(4)) criterion4();
    if (want(5)) criterion5();
    if (want(6)) criterion6();
    if (want(7)) criterion7();
    if (want(8)) criterion8();
    if (want(9)) criterion9();
    if (want(10)) criterion10();
    if (want(11)) criterion11();
    if (want(12)) criterion12();
  } catch (const Error& e) {
    std::printf("FAIL suite aborted by error: %s\n", e.what());
    return 1;
  }

  int failed = 0;
  for (const auto& o : outcomes) failed += o.pass ? 0 : 1;
  std::printf("%d/%zu criteria passed\n", static_cast<int>(outcomes.size()) - failed,
              outcomes.size());
  return failed == 0 ? 0 : 1;
}
