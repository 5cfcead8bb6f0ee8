#include <doctest.h>

#include <cmath>
#include <numbers>

#include "capdens/distance.hpp"
#include "capdens/errors.hpp"
#include "capdens/sets.hpp"
#include "capdens/solver.hpp"
#include "support/direct_capacity.hpp"

using namespace capdens;

namespace {

SpaceSpec box_space(std::vector<std::array<double, 2>> bounds) {
  SpaceSpec s;
  s.shape = EuclideanBox{std::move(bounds)};
  return s;
}

MetricGraph annulus_graph(double h) {
  const double half = 2.0 + 8.0 * h;
  return build_graph(box_space({{-half, half}, {-half, half}}),
                     Box{{{-half, half}, {-half, half}}}, h);
}

// closed-form oracle: planar radial condenser value 2*pi / ln(b/a)
double radial_capacity_2d(double a, double b) { return 2.0 * std::numbers::pi / std::log(b / a); }

}  // namespace

TEST_CASE("dirichlet energy: constants, ramps and the radial closed form") {
  const auto g1 = build_graph(box_space({{0.0, 1.0}}), Box{{{0.0, 1.0}}}, 1.0 / 64);
  std::vector<double> constant(g1.node_count(), 0.7);
  for (double p : {1.5, 2.0, 3.0}) CHECK(dirichlet_energy(g1, constant, p) == 0.0);

  std::vector<double> ramp(g1.node_count());
  for (int32_t v = 0; v < g1.node_count(); ++v) ramp[v] = g1.node_coords(v)[0];
  for (double p : {1.5, 2.0, 3.0})
    CHECK(dirichlet_energy(g1, ramp, p) == doctest::Approx(1.0).epsilon(0.01));

  ramp[3] = std::nan("");
  CHECK_THROWS_AS(dirichlet_energy(g1, ramp, 2.0), Error);

  // sampled continuum potential of the 1 < r < 2 annulus at p = 2
  const auto g2 = annulus_graph(1.0 / 32);
  std::vector<double> radial(g2.node_count());
  for (int32_t v = 0; v < g2.node_count(); ++v) {
    const auto c = g2.node_coords(v);
    const double r = std::hypot(c[0], c[1]);
    radial[v] = r <= 1.0 ? 1.0 : (r >= 2.0 ? 0.0 : std::log(2.0 / r) / std::log(2.0));
  }
  CHECK(dirichlet_energy(g2, radial, 2.0) ==
        doctest::Approx(radial_capacity_2d(1.0, 2.0)).epsilon(0.05));
}

TEST_CASE("1d point condenser capacity approaches 2 for every p") {
  const auto g = build_graph(box_space({{-1.25, 1.25}}), Box{{{-1.25, 1.25}}}, 1.0 / 64);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.0}, 0.9 / 64));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0}, 1.0));
  REQUIRE(E.size() == 1);
  for (double p : {1.5, 2.0, 3.0}) {
    SolverConfig cfg;
    cfg.p = p;
    const auto cap = variational_capacity(g, E, omega, cfg);
    CHECK(cap.value == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("2d annulus capacity and potential match the radial solution") {
  const auto g = annulus_graph(1.0 / 32);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 2.0));
  SolverConfig cfg;
  const auto cap = variational_capacity(g, E, omega, cfg);
  CHECK(cap.value == doctest::Approx(radial_capacity_2d(1.0, 2.0)).epsilon(0.04));
  // pointwise agreement away from the plates
  for (double r : {1.25, 1.5, 1.75}) {
    const int32_t v = g.nearest_node(std::vector<double>{r, 0.0});
    CHECK(cap.potential.values[v] ==
          doctest::Approx(std::log(2.0 / r) / std::log(2.0)).epsilon(0.03));
  }
  // energy identity: value equals the energy of the returned potential
  CHECK(cap.value == dirichlet_energy(g, cap.potential.values, cfg.p));
}

TEST_CASE("3d shell capacity approaches the radial closed form") {
  const double h = 0.1;
  const double half = 2.0 + 4.0 * h;
  const auto g = build_graph(box_space({{-half, half}, {-half, half}, {-half, half}}),
                             Box{{{-half, half}, {-half, half}, {-half, half}}}, h);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.0, 0.0, 0.0}, 1.0));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0, 0.0}, 2.0));
  SolverConfig cfg;
  const auto cap = variational_capacity(g, E, omega, cfg);
  // 4*pi / (1/1 - 1/2) = 8*pi
  CHECK(cap.value == doctest::Approx(8.0 * std::numbers::pi).epsilon(0.08));
}

TEST_CASE("one free layer gives the flat ramp and exact plate values") {
  const auto g = build_graph(box_space({{0.0, 1.0}, {0.0, 1.0}}),
                             Box{{{0.0, 1.0}, {0.0, 1.0}}}, 0.25);
  // E = everything except the outermost shell and the single layer inside it
  std::vector<int32_t> e_nodes, omega_nodes;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    const auto c = g.node_coords(v);
    const double margin = std::min({c[0], 1.0 - c[0], c[1], 1.0 - c[1]});
    if (margin > 0.25 + 1e-9) e_nodes.push_back(v);
    if (margin > -1e-9 && margin < 0.25 - 1e-9) continue;
  }
  for (int32_t v = 0; v < g.node_count(); ++v) {
    const auto c = g.node_coords(v);
    const double margin = std::min({c[0], 1.0 - c[0], c[1], 1.0 - c[1]});
    if (margin > 0.25 - 1e-9) omega_nodes.push_back(v);
  }
  const NodeSet E(e_nodes), omega(omega_nodes);
  REQUIRE(!E.empty());
  SolverConfig cfg;
  const auto u = capacitary_potential(g, E, omega, cfg);
  for (int32_t v : E) CHECK(u.values[v] == 1.0);
  for (int32_t v : omega.complement(g.node_count())) CHECK(u.values[v] == 0.0);
  for (double x : u.values) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("condenser preconditions raise the documented errors") {
  const auto g = build_graph(box_space({{0.0, 1.0}}), Box{{{0.0, 1.0}}}, 0.125);
  const auto inner = rasterize_set(g, SetSpec::make_ball({0.5}, 0.2));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.5}, 0.4));
  SolverConfig cfg;
  CHECK_THROWS_AS(capacitary_potential(g, NodeSet{}, omega, cfg), Error);
  CHECK_THROWS_AS(capacitary_potential(g, omega, inner, cfg), Error);
  CHECK_THROWS_AS(capacitary_potential(g, inner, NodeSet::all(g.node_count()), cfg), Error);
}

TEST_CASE("iterative capacity matches the direct band-cholesky solve at p=2") {
  const auto g = build_graph(box_space({{-1.0, 1.0}, {-1.0, 1.0}}),
                             Box{{{-1.0, 1.0}, {-1.0, 1.0}}}, 0.1);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.1, -0.2}, 0.35));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.9));
  SolverConfig cfg;
  const auto cap = variational_capacity(g, E, omega, cfg);
  const double direct = capdens_test::direct_capacity_p2(g, E, omega);
  CHECK(cap.value == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("superlevel sets of the annulus potential land on the predicted ball") {
  const auto g = annulus_graph(1.0 / 32);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 2.0));
  SolverConfig cfg;
  const auto u = capacitary_potential(g, E, omega, cfg);

  CHECK(superlevel_set(g, u, 1.0, true).empty());
  CHECK(E.is_subset_of(superlevel_set(g, u, 1.0, false)));
  CHECK_THROWS_AS(superlevel_set(g, u, 0.0, true), Error);
  CHECK_THROWS_AS(superlevel_set(g, u, 1.5, true), Error);

  // level 0.5 of log(2/r)/log 2 sits at r = sqrt(2)
  const auto em = superlevel_set(g, u, 0.5, true);
  const double r_level = std::sqrt(2.0);
  const auto outer = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, r_level + 6 * g.h));
  const auto inner = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, r_level - 6 * g.h));
  CHECK(em.is_subset_of(outer));
  CHECK(inner.is_subset_of(em));
}

TEST_CASE("superlevel capacity ratio approaches the power law") {
  const auto g = annulus_graph(1.0 / 32);
  const auto E = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0));
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 2.0));
  SolverConfig cfg;
  cfg.p = 2.0;
  const auto base = variational_capacity(g, E, omega, cfg);
  const auto em = superlevel_set(g, base.potential, 0.5, true);
  const auto capm = variational_capacity(g, em, omega, cfg);
  // M^(1-p) = 2 at M = 1/2, p = 2
  CHECK(capm.value / base.value == doctest::Approx(2.0).epsilon(0.06));
}

TEST_CASE("capacity is monotone in E and antitone in Omega; subadditive") {
  const auto g = build_graph(box_space({{-1.0, 1.0}, {-1.0, 1.0}}),
                             Box{{{-1.0, 1.0}, {-1.0, 1.0}}}, 0.1);
  const auto e1 = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.2));
  const auto e2 = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.35));
  const auto o1 = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.7));
  const auto o2 = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.9));
  for (double p : {1.5, 2.0, 3.0}) {
    SolverConfig cfg;
    cfg.p = p;
    const double slack = 1.0 + 10 * cfg.tol;
    const double c11 = variational_capacity(g, e1, o1, cfg).value;
    const double c21 = variational_capacity(g, e2, o1, cfg).value;
    const double c12 = variational_capacity(g, e1, o2, cfg).value;
    CHECK(c11 <= c21 * slack);
    CHECK(c12 <= c11 * slack);

    const auto e3 = rasterize_set(g, SetSpec::make_ball({0.3, 0.1}, 0.2));
    const double c31 = variational_capacity(g, e3, o1, cfg).value;
    const double cu = variational_capacity(g, e1.set_union(e3), o1, cfg).value;
    CHECK(cu <= (c11 + c31) * slack);
  }
}

TEST_CASE("comparison principle for nested condensers") {
  const auto g = build_graph(box_space({{-1.0, 1.0}, {-1.0, 1.0}}),
                             Box{{{-1.0, 1.0}, {-1.0, 1.0}}}, 0.1);
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.9));
  const auto V = rasterize_set(g, SetSpec::make_ball({0.2, 0.0}, 0.45));
  const auto eprime = rasterize_set(g, SetSpec::make_ball({0.2, 0.0}, 0.15));
  const auto E = eprime.set_union(rasterize_set(g, SetSpec::make_ball({-0.5, -0.4}, 0.15)));
  for (double p : {1.5, 2.0, 3.0}) {
    SolverConfig cfg;
    cfg.p = p;
    const auto ue = capacitary_potential(g, E, omega, cfg);
    const auto up = capacitary_potential(g, eprime, V, cfg);

    // a = sup of 1-u_E over the two-cell boundary layer of V
    const auto layer =
        eps_neighborhood(g, V, 2.5 * g.h, Metric::ambient).set_difference(V);
    double a = 0.0;
    for (int32_t v : layer) a = std::max(a, 1.0 - ue.values[v]);
    double worst = -1.0;
    for (int32_t v : V) worst = std::max(worst, (1.0 - ue.values[v]) - a * (1.0 - up.values[v]));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("ball condenser capacity scales like r^-p mu(B(x,r))") {
  // the normalized quotient stays in a narrow band across a decade of radii
  const auto g = build_graph(box_space({{-4.5, 4.5}, {-4.5, 4.5}}),
                             Box{{{-4.5, 4.5}, {-4.5, 4.5}}}, 1.0 / 16);
  SolverConfig cfg;
  cfg.p = 1.5;
  double lo = kInf, hi = 0.0;
  for (double r : {0.4, 0.8, 1.6}) {
    const auto E = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.5 * r));
    const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 2.0 * r));
    const auto ball = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, r));
    double mu = 0.0;
    for (int32_t v : ball) mu += g.measure[v];
    const double cap = variational_capacity(g, E, omega, cfg).value;
    const double q = cap / (std::pow(r, -cfg.p) * mu);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  CHECK(hi / lo < 2.0);  // regression band measured on this geometry
}

TEST_CASE("sobolev capacity warns when the box margin is unsafe") {
  SolverConfig cfg;
  const auto tight = build_graph(box_space({{-4.0, 4.0}, {-4.0, 4.0}}),
                                 Box{{{-4.0, 4.0}, {-4.0, 4.0}}}, 0.25);
  const auto ball = rasterize_set(tight, SetSpec::make_ball({0.0, 0.0}, 1.0));
  const auto res = sobolev_capacity(tight, ball, cfg);
  REQUIRE(!res.warnings.empty());
  CHECK(res.warnings[0].find("truncation-unsafe") != std::string::npos);

  // E reaching the box edge warns as well
  const auto rim = rasterize_set(tight, SetSpec::make_ball({3.8, 0.0}, 0.5));
  const auto res2 = sobolev_capacity(tight, rim, cfg);
  REQUIRE(!res2.warnings.empty());
  CHECK(res2.warnings[0].find("truncation-unsafe") != std::string::npos);
}

TEST_CASE("potential infimum bound against the capacity ratio") {
  const auto g = build_graph(box_space({{-1.0, 1.0}, {-1.0, 1.0}}),
                             Box{{{-1.0, 1.0}, {-1.0, 1.0}}}, 0.1);
  const auto omega = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 0.9));
  const auto E = rasterize_set(g, SetSpec::make_ball({-0.3, 0.2}, 0.25));
  const auto A = rasterize_set(g, SetSpec::make_ball({0.4, -0.3}, 0.2));
  for (double p : {1.5, 2.0, 3.0}) {
    SolverConfig cfg;
    cfg.p = p;
    const auto ue = capacitary_potential(g, E, omega, cfg);
    const double cap_e = variational_capacity(g, E, omega, cfg).value;
    const double cap_a = variational_capacity(g, A, omega, cfg).value;
    double inf_a = 1.0;
    for (int32_t v : A) inf_a = std::min(inf_a, ue.values[v]);
    CHECK(inf_a <= std::pow(cap_e / cap_a, 1.0 / (p - 1.0)) + 1e-6);
  }
}

TEST_CASE("sobolev capacity: empty set, measure bound and the unit-ball bracket") {
  const auto g = build_graph(box_space({{-9.0, 9.0}, {-9.0, 9.0}}),
                             Box{{{-9.0, 9.0}, {-9.0, 9.0}}}, 0.125);
  SolverConfig cfg;
  CHECK(sobolev_capacity(g, NodeSet{}, cfg).value == 0.0);

  const auto ball = rasterize_set(g, SetSpec::make_ball({0.0, 0.0}, 1.0));
  const auto cp = sobolev_capacity(g, ball, cfg);
  double mu = 0.0;
  for (int32_t v : ball) mu += g.measure[v];
  CHECK(cp.value >= mu);
  CHECK(cp.value >= std::numbers::pi * 0.98);
  CHECK(cp.value <= 8.0 * std::numbers::pi);
}
