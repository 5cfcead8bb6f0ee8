#pragma once

#include <span>
#include <vector>

#include "capdens/capacity_types.hpp"
#include "capdens/grid.hpp"
#include "capdens/node_set.hpp"

namespace capdens {

/// One finite-difference term of the nodal gradient: the axis component at
/// `node` is (u[a] - u[b]) * inv_scale, central where both axis neighbors
/// exist, one-sided at geometry boundaries.
struct GradTerm {
  int32_t node;
  int32_t a;
  int32_t b;
  double inv_scale;
};

/// All gradient terms of a graph, node-major, axis order within a node.
std::vector<GradTerm> gradient_terms(const MetricGraph& g);

/// Squared nodal gradient magnitude |grad u|_i^2 for a full field.
std::vector<double> gradient_sq(const MetricGraph& g, const std::vector<GradTerm>& terms,
                                std::span<const double> u);

/// Sum_i mu_i |grad u|_i^p. Errors: "invalid-field" on NaN/inf entries.
double dirichlet_energy(const MetricGraph& g, std::span<const double> u, double p);

/// Minimizer of the p-Dirichlet energy with u = 1 on E, u = 0 outside Omega.
/// `init` optionally warm-starts the free values (full field, used where free).
/// Errors: "empty-inner-plate", "inadmissible-condenser", "no-boundary".
PotentialField capacitary_potential(const MetricGraph& g, const NodeSet& E, const NodeSet& omega,
                                    const SolverConfig& config,
                                    const std::vector<double>* init = nullptr);

/// Capacity of the condenser (E, Omega): energy of the capacitary potential.
CapacityResult variational_capacity(const MetricGraph& g, const NodeSet& E, const NodeSet& omega,
                                    const SolverConfig& config,
                                    const std::vector<double>* init = nullptr);

/// Whole-graph capacity: minimizes sum mu |u|^p + p-Dirichlet energy over
/// u = 1 on E with free behavior at the box boundary. Empty E gives 0.
/// A "truncation-unsafe" warning is attached when the box margin around E is
/// smaller than max(4 diam(E), 8) or E touches the box boundary.
CapacityResult sobolev_capacity(const MetricGraph& g, const NodeSet& E,
                                const SolverConfig& config);

/// Nodes with u > M (strict) or u >= M. Errors: "invalid-level" unless 0 < M <= 1.
NodeSet superlevel_set(const MetricGraph& g, const PotentialField& u, double M, bool strict);

}  // namespace capdens
