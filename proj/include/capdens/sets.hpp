#pragma once

#include <memory>
#include <vector>

#include "capdens/capacity_types.hpp"
#include "capdens/grid.hpp"
#include "capdens/node_set.hpp"

namespace capdens {

/// Declarative description of a point set, rasterized exactly at node
/// coordinates (strict inequalities evaluated as written, no dilation).
struct SetSpec {
  enum class Kind {
    ball,             // d(x, center) < radius
    lower_half_ball,  // ball minus its open upper half (last coord <= center's)
    lattice_balls,    // union of B(z, radius) over z in (spacing*Z)^n, minus excluded H
    box,              // closed axis-aligned box
    superlevel,       // potential threshold
    set_union,
    set_intersection,
    set_complement,
  };

  Kind kind = Kind::ball;

  std::vector<double> center;
  double radius = 0.0;
  double spacing = 0.0;
  // lattice_balls: drop lattice centers within 1/2 of a removed slit half-ball
  bool exclude_slit_neighborhood = false;
  std::vector<std::array<double, 2>> bounds;
  const PotentialField* field = nullptr;
  double level = 0.0;
  bool strict = false;
  std::vector<SetSpec> children;

  static SetSpec make_ball(std::vector<double> center, double radius);
  static SetSpec make_lower_half_ball(std::vector<double> center, double radius);
  static SetSpec make_lattice_balls(double spacing, double radius, bool exclude_slits);
  static SetSpec make_box(std::vector<std::array<double, 2>> bounds);
  static SetSpec make_superlevel(const PotentialField* field, double level, bool strict);
  static SetSpec make_union(std::vector<SetSpec> children);
  static SetSpec make_intersection(std::vector<SetSpec> children);
  static SetSpec make_complement(SetSpec child);
};

/// Exact node membership under the continuous definition.
/// Errors: "mismatched-graph" when a superlevel spec references a potential
/// computed on a different graph; "invalid-set" on bad parameters.
NodeSet rasterize_set(const MetricGraph& g, const SetSpec& spec);

}  // namespace capdens
