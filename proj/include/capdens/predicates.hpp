#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capdens/capacity_types.hpp"
#include "capdens/distance.hpp"
#include "capdens/grid.hpp"
#include "capdens/node_set.hpp"

namespace capdens {

/// Per-node distance to the node-complement of U (0 outside U, +inf when U is
/// the whole graph).
std::vector<double> clearance_field(const MetricGraph& g, const NodeSet& U, Metric metric);

struct CorkscrewEntry {
  int32_t x = -1;
  double r = 0.0;
  double kappa = 0.0;
  int32_t witness = -1;  // node y realizing max min(delta(y), r - d(x,y)) / r
};

struct CorkscrewProfile {
  std::vector<CorkscrewEntry> entries;
  double min_kappa = 1.0;
  CorkscrewEntry worst;
};

struct CorkscrewParams {
  int x_stride_cells = 2;       // sub-lattice stride for sample points
  double r_min = 0.0;           // defaults to 4h when 0
  double r_max = 0.0;           // required
  double r_factor = 1.4142135623730951;
  Metric metric = Metric::ambient;
};

/// kappa(x, r) = max_y min(delta_U(y), r - d(x,y)) / r over sampled x in U and
/// a geometric r ladder. Errors: "empty-sample-set".
CorkscrewProfile corkscrew_profile(const MetricGraph& g, const NodeSet& U,
                                   const CorkscrewParams& params);

struct JohnEstimate {
  int32_t center = -1;
  std::vector<int32_t> nodes;      // the nodes of U, in index order
  std::vector<double> constants;   // certified lower bound per node
  std::vector<uint8_t> unreachable;
  double min_constant = 1.0;
  int32_t argmin = -1;
  std::vector<int32_t> argmin_path;  // argmin node -> ... -> center
};

/// Certified lower bounds on the John constant toward `center`: a descending
/// ladder of candidate constants is checked by an exact max-min propagation
/// inside U; every reported bound is re-derived from its stored path against
/// the clearance field. `resolution` is the ladder granularity.
JohnEstimate john_lower_bound(const MetricGraph& g, const NodeSet& U, int32_t center,
                              int resolution = 256);

/// Re-walk a path (node -> center) and return the exact min of
/// delta(y) / length(start..y); the soundness check for stored certificates.
double certify_john_path(const MetricGraph& g, const std::vector<double>& clearance,
                         const std::vector<int32_t>& path);

struct ProbeRow {
  double rho = 0.0;
  double R = 0.0;
  double ratio = 0.0;
  double phi = 0.0;  // 1 - ratio
  std::string flag;
};

struct StabilityProbe {
  std::vector<ProbeRow> rows;
  double tau = 2.0;
  double gamma = 1.0;
  double beta = 0.0;
  std::vector<std::string> warnings;
};

/// cap(U_rho, Omega) / cap(U, Omega) for each rho; U_rho is the sweep-based
/// rho-interior. Empty interiors record ratio 0 with a flag.
StabilityProbe inner_approx_curve(const MetricGraph& g, const NodeSet& U, const NodeSet& omega,
                                  const std::vector<double>& rho_list, const SolverConfig& solver);

/// Inner-metric beta*diam(U) neighborhood of U.
NodeSet neighborhood_set(const MetricGraph& g, const NodeSet& U, double beta);

enum class ProbeFamily {
  inner_balls,          // U = B_in(x,R), rho-interior by sweep
  ordinary_balls,       // cap(B(x,R),.) vs cap(B(x,R+rho),.) as radius shrink
  beta_neighborhoods,   // U = (B(x,R))^beta, rho-interior by sweep
  john_family,          // inner balls with their certified John bound recorded
};

struct StabilityProbeParams {
  ProbeFamily family = ProbeFamily::inner_balls;
  std::vector<std::pair<int32_t, double>> members;  // (center node, R)
  double rho = 1.0;
  double tau = 2.0;
  double gamma = 1.0;
  double beta = 0.25;  // beta_neighborhoods only
  SolverConfig solver;
};

/// Measured phi(rho, R) table for a family of sets, one row per member.
StabilityProbe stability_probe(const MetricGraph& g, const StabilityProbeParams& params);

}  // namespace capdens
