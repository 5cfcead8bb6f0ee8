#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "capdens/grid.hpp"
#include "capdens/node_set.hpp"

namespace capdens {

enum class Metric { ambient, inner };

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exact Euclidean distance from every node to the nearest seed node
/// (separable squared-distance transform over the bounding lattice).
std::vector<double> ambient_distance_field(const MetricGraph& g, const NodeSet& seeds);

/// Multi-source shortest-path distance along the full 2*3^n-2 stencil with
/// Euclidean step lengths; +inf on nodes unreachable from the sources.
/// With `mask`, path nodes (sources included) are restricted to the mask.
/// Errors: "empty-source".
std::vector<double> inner_distance_field(const MetricGraph& g, const NodeSet& sources,
                                         const NodeSet* mask = nullptr);

/// Distance field to `seeds` in the requested metric (EDT or Dijkstra sweep).
std::vector<double> distance_field(const MetricGraph& g, const NodeSet& seeds, Metric metric);

/// Nodes with distance < r from `center` in the chosen metric.
NodeSet ball_nodes(const MetricGraph& g, int32_t center, double r, Metric metric);
/// Same, against a precomputed center distance field.
NodeSet ball_nodes(const MetricGraph& g, const std::vector<double>& center_dist, double r);

/// Nodes of U whose distance to the node-complement of U exceeds eps.
NodeSet eps_interior(const MetricGraph& g, const NodeSet& U, double eps, Metric metric);

/// U together with all nodes at distance < eps from U.
NodeSet eps_neighborhood(const MetricGraph& g, const NodeSet& U, double eps, Metric metric);

struct QuasiconvexityEstimate {
  double L = 1.0;                  // max sampled inner/ambient distance ratio
  int32_t witness_a = -1;          // pair realizing the max
  int32_t witness_b = -1;
  bool disconnected_pair = false;  // true when L is +inf
  int sampled_pairs = 0;
};

/// Seeded sample of node pairs; L = max d_in/d. Disconnected pairs report +inf
/// with the witness pair. Deterministic for a fixed seed.
QuasiconvexityEstimate quasiconvexity_estimate(const MetricGraph& g, int sample_pairs,
                                               uint64_t seed);

/// Largest pairwise Euclidean distance within U (0 for singletons/empty).
double set_diameter(const MetricGraph& g, const NodeSet& U);

}  // namespace capdens
