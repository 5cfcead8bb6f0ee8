#include <doctest.h>

#include <cmath>

#include "capdens/errors.hpp"
#include "capdens/grid.hpp"

using namespace capdens;

namespace {

SpaceSpec box_space(std::vector<std::array<double, 2>> bounds) {
  SpaceSpec s;
  s.shape = EuclideanBox{std::move(bounds)};
  return s;
}

}  // namespace

TEST_CASE("1d interval at h=0.5 has 3 nodes and 2 unit-h edges") {
  const auto space = box_space({{0.0, 1.0}});
  const auto g = build_graph(space, Box{{{0.0, 1.0}}}, 0.5);
  CHECK(g.node_count() == 3);
  CHECK(g.adj_offset.back() == 4);  // 2 undirected edges
  // edge lengths equal the Euclidean distance between endpoints
  for (int32_t v = 0; v < g.node_count(); ++v) {
    for (int32_t k = g.adj_offset[v]; k < g.adj_offset[v + 1]; ++k) {
      CHECK(g.euclidean(v, g.adj_node[k]) == doctest::Approx(g.h));
    }
  }
}

TEST_CASE("slit space grid excludes nodes in the removed half-ball") {
  SpaceSpec s;
  s.shape = SlitSpace{2, 1};
  const auto g = build_graph(s, Box{{{2.0, 6.0}, {-1.0, 1.0}}}, 0.25);
  CHECK(g.nearest_node(std::vector<double>{4.0, 0.5}) >= 0);
  // the nearest node to (4, 0.5) cannot be (4, 0.5) itself
  const int32_t v = g.nearest_node(std::vector<double>{4.0, 0.5});
  const auto c = g.node_coords(v);
  CHECK((std::fabs(c[0] - 4.0) > 1e-12 || std::fabs(c[1] - 0.5) > 1e-12));
  // but (4, 0) is a node
  const int32_t w = g.nearest_node(std::vector<double>{4.0, 0.0});
  CHECK(g.node_coords(w)[0] == doctest::Approx(4.0));
  CHECK(g.node_coords(w)[1] == doctest::Approx(0.0));
}

TEST_CASE("cosine strip grid includes (0, 1.4)") {
  SpaceSpec s;
  s.shape = CosineStrip{-2.0, 2.0};
  const auto g = build_graph(s, Box{{{-2.0, 2.0}, {-2.0, 2.0}}}, 0.2);
  const int32_t v = g.nearest_node(std::vector<double>{0.0, 1.4});
  CHECK(g.node_coords(v)[0] == doctest::Approx(0.0));
  CHECK(g.node_coords(v)[1] == doctest::Approx(1.4));
}

TEST_CASE("total measure approximates volume and equals the cell-measure sum") {
  const auto space = box_space({{0.0, 1.0}, {0.0, 2.0}});
  const auto g = build_graph(space, Box{{{0.0, 1.0}, {0.0, 2.0}}}, 1.0 / 16);
  double s = 0.0;
  for (double m : g.measure) {
    CHECK(m > 0.0);
    s += m;
  }
  CHECK(s == doctest::Approx(g.total_measure()));
  CHECK(s == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("connected geometries rasterize to connected graphs") {
  SpaceSpec slit;
  slit.shape = SlitSpace{2, 1};
  const auto g = build_graph(slit, Box{{{1.0, 7.0}, {-1.5, 2.5}}}, 0.125);
  int32_t comps = 0;
  connected_components(g, &comps);
  CHECK(comps == 1);

  SpaceSpec strip;
  strip.shape = CosineStrip{-6.0, 6.0};
  const auto gs = build_graph(strip, Box{{{-6.0, 6.0}, {-1.6, 1.6}}}, 0.125);
  connected_components(gs, &comps);
  CHECK(comps == 1);
}

TEST_CASE("degenerate build inputs raise the documented errors") {
  const auto space = box_space({{0.0, 1.0}});
  CHECK_THROWS_WITH_AS(build_graph(space, Box{{{0.0, 0.4}}}, 0.5), doctest::Contains("resolution-too-coarse"),
                       Error);
  CHECK_THROWS_WITH_AS(build_graph(space, Box{{{2.0, 3.0}}}, 0.5), doctest::Contains("empty-domain"),
                       Error);
}
