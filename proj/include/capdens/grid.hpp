#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "capdens/geometry.hpp"

namespace capdens {

/// Weighted metric graph obtained by rasterizing a continuous space onto a
/// lattice of spacing h inside a bounding box. Nodes are the lattice points
/// that belong to the space; node measures are cell volumes clipped by a
/// 3^n-point subsample of the cell against the space. Edges connect the 2n
/// axis neighbors and all have length h. Immutable after construction.
struct MetricGraph {
  SpaceSpec space;
  Box box;
  double h = 0.0;
  int dim = 0;

  std::vector<int> cells;       // lattice point counts per axis
  std::vector<double> origin;   // coordinate of lattice index 0 per axis
  std::vector<int64_t> stride;  // lattice strides, axis 0 fastest

  std::vector<int32_t> cell_to_node;  // full lattice -> node id or -1
  std::vector<double> coords;         // node-major, dim entries per node
  std::vector<double> measure;        // per-node mu_i > 0
  std::vector<int64_t> node_cell;     // node -> lattice index

  // axis adjacency, CSR
  std::vector<int32_t> adj_offset;
  std::vector<int32_t> adj_node;

  uint64_t id = 0;  // identity token for cross-checking references

  int32_t node_count() const { return static_cast<int32_t>(measure.size()); }
  std::span<const double> node_coords(int32_t v) const {
    return {coords.data() + static_cast<std::size_t>(v) * dim, static_cast<std::size_t>(dim)};
  }
  double total_measure() const;

  int64_t lattice_index(std::span<const int> idx) const;
  void lattice_coords(int64_t cell, std::span<int> idx) const;
  int32_t node_at(std::span<const int> idx) const;

  /// Node nearest to a point (Euclidean over node coordinates); -1 on empty graph.
  int32_t nearest_node(std::span<const double> x) const;

  double euclidean(int32_t a, int32_t b) const;
  double euclidean_to(int32_t a, std::span<const double> x) const;
};

/// Rasterize `space` inside `box` at spacing `h`.
/// Errors: "resolution-too-coarse" when h exceeds a box extent,
/// "empty-domain" when no lattice point of the box lies in the space.
MetricGraph build_graph(const SpaceSpec& space, const Box& box, double h);

/// Connected components over axis adjacency; returns component id per node.
std::vector<int32_t> connected_components(const MetricGraph& g, int32_t* count = nullptr);

}  // namespace capdens
