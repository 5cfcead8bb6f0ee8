#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "capdens/node_set.hpp"

namespace capdens {

/// Parameters of the energy minimizer. The smoothing sequence eps_k halves
/// from eps0 down to eps_floor while the reweighted quadratic problems are
/// solved; iteration stops once the relative energy decrease drops below tol.
struct SolverConfig {
  double p = 2.0;          // exponent, 1 < p < inf
  double tol = 1e-8;       // relative energy-decrease stopping threshold
  int max_iter = 10000;    // outer iteration cap
  double eps0 = 1.0;       // initial gradient smoothing
  double eps_floor = 1e-9; // smoothing floor > 0

  void validate() const;
};

/// Per-node values of a capacitary potential, 1 on the inner plate and 0
/// outside the condenser domain by construction, in [0,1] everywhere.
struct PotentialField {
  uint64_t graph_id = 0;
  std::vector<double> values;
  NodeSet inner_plate;   // E
  NodeSet domain;        // Omega (empty for whole-space problems)
  SolverConfig config;
};

struct CapacityResult {
  double value = 0.0;
  PotentialField potential;
  int iterations = 0;             // outer iterations
  double final_residual = 0.0;    // last relative energy decrease
  std::vector<double> energy_trace;
  std::vector<std::string> warnings;
};

}  // namespace capdens
