#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "capdens/capacity_types.hpp"
#include "capdens/distance.hpp"
#include "capdens/grid.hpp"
#include "capdens/node_set.hpp"

namespace capdens {

/// Center selection for a density scan: an explicit node list, or a
/// sub-lattice stride rule optionally extended by the geometry's adversarial
/// centers (the half-ball centers of a slit space).
struct CenterRule {
  std::vector<int32_t> explicit_nodes;
  int stride_cells = 4;            // stride-rule sampling when explicit list empty
  bool include_adversarial = true;
};

struct DensityParams {
  double r = 1.0;
  double tau = 2.0;
  Metric metric = Metric::ambient;
  CenterRule centers;
  SolverConfig solver;
  bool skip_errors = false;  // record per-center failures instead of raising
  int threads = 1;
};

struct DensityRecord {
  int32_t center = -1;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
  std::string error;  // nonempty when the center was skipped
};

/// Per-center capacity ratios and their minimum. The minimum over sampled
/// centers is an upper bound for the infimum over all centers.
struct DensityScan {
  std::vector<DensityRecord> records;  // ordered by center node index
  double min_ratio = kInf;
  int32_t argmin_center = -1;
  bool sampled_upper_bound = true;
  std::vector<std::string> warnings;
};

/// cap(E ∩ B(x,r), B(x,tau r)) / cap(B(x,r), B(x,tau r)) at one center.
/// Errors: "ball-out-of-box" when B(x, tau r) does not fit the graph box with
/// margin >= h (never silently clipped).
DensityRecord density_ratio(const MetricGraph& g, const NodeSet& E, int32_t x,
                            const DensityParams& params);

/// Minimum of density_ratio over the sampled centers.
DensityScan density_scan(const MetricGraph& g, const NodeSet& E, const DensityParams& params);

/// Whole-space capacity analogue: both capacities computed by sobolev_capacity.
DensityScan sobolev_density_scan(const MetricGraph& g, const NodeSet& E, double r,
                                 const std::vector<int32_t>& centers, const SolverConfig& solver,
                                 int threads = 1);

/// min over members (U, U*) of cap(E ∩ U, U*) / cap(U, U*).
/// Errors: "invalid-collection-member" when U is not contained in U*.
DensityScan collection_density(const MetricGraph& g, const NodeSet& E,
                               const std::vector<std::pair<NodeSet, NodeSet>>& members,
                               const SolverConfig& solver, int threads = 1);

/// Nodes nearest to the slit half-ball centers that fall inside the box.
std::vector<int32_t> adversarial_centers(const MetricGraph& g);

/// Centers admitting the B(x, tau r) margin under the rule in `params`.
std::vector<int32_t> sample_centers(const MetricGraph& g, const DensityParams& params);

}  // namespace capdens
