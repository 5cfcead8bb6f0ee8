#include "capdens/density.hpp"

#include <algorithm>
#include <cmath>

#include "capdens/errors.hpp"
#include "capdens/parallel.hpp"
#include "capdens/solver.hpp"

namespace capdens {

namespace {

bool ball_fits_box(const MetricGraph& g, int32_t x, double radius) {
  const auto c = g.node_coords(x);
  for (int d = 0; d < g.dim; ++d) {
    if (c[d] - radius < g.box.bounds[d][0] + g.h - 1e-12) return false;
    if (c[d] + radius > g.box.bounds[d][1] - g.h + 1e-12) return false;
  }
  return true;
}

DensityRecord ratio_with_sets(const MetricGraph& g, const NodeSet& E, int32_t x,
                              const NodeSet& inner_ball, const NodeSet& outer_ball,
                              const SolverConfig& solver) {
  DensityRecord rec;
  rec.center = x;
  const auto den = variational_capacity(g, inner_ball, outer_ball, solver);
  rec.denominator = den.value;
  const NodeSet eb = E.set_intersection(inner_ball);
  if (eb.empty()) {
    rec.numerator = 0.0;
    rec.ratio = 0.0;
    return rec;
  }
  const auto num = variational_capacity(g, eb, outer_ball, solver);
  rec.numerator = num.value;
  rec.ratio = rec.denominator > 0.0 ? rec.numerator / rec.denominator : 0.0;
  return rec;
}

}  // namespace

DensityRecord density_ratio(const MetricGraph& g, const NodeSet& E, int32_t x,
                            const DensityParams& params) {
  if (x < 0 || x >= g.node_count())
    fail(ErrorKind::numeric, "invalid-node", "density center is not a node");
  if (!ball_fits_box(g, x, params.tau * params.r))
    fail(ErrorKind::numeric, "ball-out-of-box",
         "B(x, tau r) does not fit the computational box with margin h");

  NodeSet inner_ball, outer_ball;
  if (params.metric == Metric::ambient) {
    inner_ball = ball_nodes(g, x, params.r, Metric::ambient);
    outer_ball = ball_nodes(g, x, params.tau * params.r, Metric::ambient);
  } else {
    const auto dist = inner_distance_field(g, NodeSet(std::vector<int32_t>{x}));
    inner_ball = ball_nodes(g, dist, params.r);
    outer_ball = ball_nodes(g, dist, params.tau * params.r);
  }
  return ratio_with_sets(g, E, x, inner_ball, outer_ball, params.solver);
}

std::vector<int32_t> adversarial_centers(const MetricGraph& g) {
  std::vector<int32_t> out;
  const auto* slits = std::get_if<SlitSpace>(&g.space.shape);
  if (slits == nullptr) return out;
  for (int j = 1; j <= slits->slit_count; ++j) {
    const auto c = slit_center(j, g.dim);
    if (!g.box.contains(c)) continue;
    const int32_t v = g.nearest_node(c);
    if (v >= 0) out.push_back(v);
  }
  return out;
}

std::vector<int32_t> sample_centers(const MetricGraph& g, const DensityParams& params) {
  std::vector<int32_t> centers;
  if (!params.centers.explicit_nodes.empty()) {
    centers = params.centers.explicit_nodes;
  } else {
    const int stride = std::max(1, params.centers.stride_cells);
    std::vector<int> idx(g.dim);
    for (int32_t v = 0; v < g.node_count(); ++v) {
      g.lattice_coords(g.node_cell[v], idx);
      bool on_sublattice = true;
      for (int d = 0; d < g.dim; ++d) on_sublattice &= (idx[d] % stride == 0);
      if (on_sublattice && ball_fits_box(g, v, params.tau * params.r)) centers.push_back(v);
    }
    if (params.centers.include_adversarial) {
      for (int32_t v : adversarial_centers(g)) {
        if (ball_fits_box(g, v, params.tau * params.r)) centers.push_back(v);
      }
    }
  }
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());
  return centers;
}

namespace {

DensityScan finish_scan(std::vector<DensityRecord> records) {
  DensityScan scan;
  scan.records = std::move(records);
  for (const auto& r : scan.records) {
    if (!r.error.empty()) continue;
    if (r.ratio < scan.min_ratio) {
      scan.min_ratio = r.ratio;
      scan.argmin_center = r.center;
    }
  }
  scan.warnings.push_back("sampled minimum is an upper bound of the infimum over all centers");
  return scan;
}

}  // namespace

DensityScan density_scan(const MetricGraph& g, const NodeSet& E, const DensityParams& params) {
  const auto centers = sample_centers(g, params);
  if (centers.empty())
    fail(ErrorKind::config, "empty-centers", "no admissible scan centers after sampling");

  std::vector<DensityRecord> records(centers.size());
  parallel_for(static_cast<int>(centers.size()), params.threads, [&](int i) {
    try {
      records[i] = density_ratio(g, E, centers[i], params);
    } catch (const Error& e) {
      if (!params.skip_errors) throw;
      records[i].center = centers[i];
      records[i].error = e.code();
    }
  });
  return finish_scan(std::move(records));
}

DensityScan sobolev_density_scan(const MetricGraph& g, const NodeSet& E, double r,
                                 const std::vector<int32_t>& centers, const SolverConfig& solver,
                                 int threads) {
  if (centers.empty())
    fail(ErrorKind::config, "empty-centers", "no centers given for the scan");
  for (int32_t x : centers) {
    if (!ball_fits_box(g, x, r))
      fail(ErrorKind::numeric, "ball-out-of-box",
           "B(x, r) does not fit the computational box with margin h");
  }
  std::vector<int32_t> sorted = centers;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<DensityRecord> records(sorted.size());
  parallel_for(static_cast<int>(sorted.size()), threads, [&](int i) {
    const int32_t x = sorted[i];
    DensityRecord rec;
    rec.center = x;
    const NodeSet ball = ball_nodes(g, x, r, Metric::ambient);
    const auto den = sobolev_capacity(g, ball, solver);
    rec.denominator = den.value;
    const NodeSet eb = E.set_intersection(ball);
    if (!eb.empty()) {
      const auto num = sobolev_capacity(g, eb, solver);
      rec.numerator = num.value;
    }
    rec.ratio = rec.denominator > 0.0 ? rec.numerator / rec.denominator : 0.0;
    records[i] = rec;
  });
  return finish_scan(std::move(records));
}

DensityScan collection_density(const MetricGraph& g, const NodeSet& E,
                               const std::vector<std::pair<NodeSet, NodeSet>>& members,
                               const SolverConfig& solver, int threads) {
  if (members.empty())
    fail(ErrorKind::config, "empty-centers", "collection has no members");
  for (const auto& [u, ustar] : members) {
    if (!u.is_subset_of(ustar))
      fail(ErrorKind::numeric, "invalid-collection-member", "member U not contained in U*");
  }
  std::vector<DensityRecord> records(members.size());
  parallel_for(static_cast<int>(members.size()), threads, [&](int i) {
    records[i] = ratio_with_sets(g, E, /*x=*/static_cast<int32_t>(i), members[i].first,
                                 members[i].second, solver);
  });
  // record index identifies the member here, not a node
  DensityScan scan = finish_scan(std::move(records));
  return scan;
}

}  // namespace capdens
