#include "capdens/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "capdens/errors.hpp"
#include "capdens/solver.hpp"

namespace capdens {

std::vector<double> clearance_field(const MetricGraph& g, const NodeSet& U, Metric metric) {
  if (U.empty()) fail(ErrorKind::numeric, "empty-source", "U is empty");
  const NodeSet comp = U.complement(g.node_count());
  std::vector<double> delta(g.node_count(), 0.0);
  if (comp.empty()) {
    std::fill(delta.begin(), delta.end(), kInf);
    return delta;
  }
  const auto dist = distance_field(g, comp, metric);
  for (int32_t v : U) delta[v] = dist[v];
  return delta;
}

CorkscrewProfile corkscrew_profile(const MetricGraph& g, const NodeSet& U,
                                   const CorkscrewParams& params) {
  if (params.r_max <= 0.0)
    fail(ErrorKind::config, "invalid-radius-range", "r_max must be positive");
  const double r_min = params.r_min > 0.0 ? params.r_min : 4.0 * g.h;

  // sample points: sub-lattice of U
  std::vector<int32_t> samples;
  std::vector<int> idx(g.dim);
  const int stride = std::max(1, params.x_stride_cells);
  for (int32_t v : U) {
    g.lattice_coords(g.node_cell[v], idx);
    bool keep = true;
    for (int d = 0; d < g.dim; ++d) keep &= (idx[d] % stride == 0);
    if (keep) samples.push_back(v);
  }
  if (samples.empty()) fail(ErrorKind::numeric, "empty-sample-set", "no sample points in U");

  std::vector<double> ladder;
  for (double r = r_min; r <= params.r_max * (1.0 + 1e-12); r *= params.r_factor)
    ladder.push_back(r);
  if (ladder.empty()) ladder.push_back(params.r_max);

  const auto delta = clearance_field(g, U, params.metric);
  const double r_top = ladder.back();

  CorkscrewProfile profile;
  profile.min_kappa = 1.0;
  const auto in_u = U.mask(g.node_count());
  std::vector<int> xi(g.dim), lo(g.dim), hi(g.dim), cur(g.dim);
  for (int32_t x : samples) {
    g.lattice_coords(g.node_cell[x], xi);
    const int w = static_cast<int>(std::ceil(r_top / g.h)) + 1;
    for (int d = 0; d < g.dim; ++d) {
      lo[d] = std::max(0, xi[d] - w);
      hi[d] = std::min(g.cells[d] - 1, xi[d] + w);
      cur[d] = lo[d];
    }
    // candidate witnesses: (d(x,y), delta(y)) over the window
    std::vector<std::pair<double, double>> cand;
    std::vector<int32_t> cand_node;
    while (true) {
      const int32_t y = g.node_at(cur);
      if (y >= 0 && in_u[y] && delta[y] > 0.0) {
        const double d = g.euclidean(x, y);
        if (d < r_top) {
          cand.emplace_back(d, delta[y]);
          cand_node.push_back(y);
        }
      }
      int d = 0;
      while (d < g.dim && ++cur[d] > hi[d]) {
        cur[d] = lo[d];
        ++d;
      }
      if (d == g.dim) break;
    }
    for (double r : ladder) {
      CorkscrewEntry e;
      e.x = x;
      e.r = r;
      for (std::size_t i = 0; i < cand.size(); ++i) {
        if (cand[i].first >= r) continue;
        const double k = std::min(cand[i].second, r - cand[i].first) / r;
        if (k > e.kappa) {
          e.kappa = k;
          e.witness = cand_node[i];
        }
      }
      e.kappa = std::min(e.kappa, 1.0);
      if (e.kappa < profile.min_kappa) {
        profile.min_kappa = e.kappa;
        profile.worst = e;
      }
      profile.entries.push_back(e);
    }
  }
  return profile;
}

namespace {

struct StencilOffset {
  std::vector<int> delta;
  double length;
};

std::vector<StencilOffset> full_stencil(int dim) {
  std::vector<StencilOffset> offsets;
  const int count = static_cast<int>(std::llround(std::pow(3.0, dim)));
  for (int s = 0; s < count; ++s) {
    StencilOffset o;
    o.delta.resize(dim);
    int t = s;
    int norm2 = 0;
    for (int d = 0; d < dim; ++d) {
      o.delta[d] = t % 3 - 1;
      t /= 3;
      norm2 += o.delta[d] * o.delta[d];
    }
    if (norm2 == 0) continue;
    o.length = std::sqrt(static_cast<double>(norm2));
    offsets.push_back(std::move(o));
  }
  return offsets;
}

}  // namespace

double certify_john_path(const MetricGraph& g, const std::vector<double>& clearance,
                         const std::vector<int32_t>& path) {
  if (path.size() < 2) return 1.0;
  double len = 0.0;
  double c = kInf;
  for (std::size_t i = 1; i < path.size(); ++i) {
    len += g.euclidean(path[i - 1], path[i]);
    c = std::min(c, clearance[path[i]] / len);
  }
  return std::min(c, 1.0);
}

JohnEstimate john_lower_bound(const MetricGraph& g, const NodeSet& U, int32_t center,
                              int resolution) {
  if (!U.contains(center))
    fail(ErrorKind::config, "invalid-node", "John center must lie in U");
  if (resolution < 2) resolution = 2;

  const auto delta = clearance_field(g, U, Metric::ambient);
  const auto in_u = U.mask(g.node_count());
  const auto offsets = full_stencil(g.dim);

  JohnEstimate est;
  est.center = center;
  est.nodes.assign(U.begin(), U.end());
  est.constants.assign(est.nodes.size(), 0.0);
  est.unreachable.assign(est.nodes.size(), 0);

  std::vector<std::size_t> u_index(g.node_count(), SIZE_MAX);
  for (std::size_t i = 0; i < est.nodes.size(); ++i) u_index[est.nodes[i]] = i;

  // reachability inside U (paths restricted to U)
  {
    const auto dist = inner_distance_field(g, NodeSet(std::vector<int32_t>{center}), &U);
    for (std::size_t i = 0; i < est.nodes.size(); ++i) {
      if (!(dist[est.nodes[i]] < kInf)) est.unreachable[i] = 1;
    }
  }

  // Descending candidate ladder; the max-min propagation per candidate c
  // computes L(y) = max over paths y->center of min_z (delta(z)/c - len(y..z));
  // c is certified at y exactly when L(y) >= 0. Settled-max pops make the
  // relaxation exact (updates only decrease values).
  std::vector<double> level(g.node_count());
  std::vector<int32_t> parent(g.node_count());
  std::vector<uint8_t> answered(est.nodes.size(), 0);
  std::vector<int> idx(g.dim), nidx(g.dim);
  std::vector<int32_t> path;

  auto extract_certified = [&](int32_t x) {
    path.clear();
    int32_t v = x;
    while (v != -1 && static_cast<int>(path.size()) <= g.node_count()) {
      path.push_back(v);
      if (v == center) break;
      v = parent[v];
    }
    return certify_john_path(g, delta, path);
  };

  auto run_pass = [&](double c) {
    std::fill(level.begin(), level.end(), -kInf);
    std::fill(parent.begin(), parent.end(), -1);
    using Item = std::pair<double, int32_t>;
    std::priority_queue<Item> heap;
    level[center] = delta[center] / c;
    heap.emplace(level[center], center);
    while (!heap.empty()) {
      const auto [val, v] = heap.top();
      heap.pop();
      if (val < level[v]) continue;
      g.lattice_coords(g.node_cell[v], idx);
      for (const auto& o : offsets) {
        for (int d = 0; d < g.dim; ++d) nidx[d] = idx[d] + o.delta[d];
        const int32_t w = g.node_at(nidx);
        if (w < 0 || !in_u[w]) continue;
        // once the running value drops below 0 it can never recover
        const double cand = std::min(delta[w] / c, val - o.length * g.h);
        if (cand < 0.0 || cand <= level[w]) continue;
        level[w] = cand;
        parent[w] = v;
        heap.emplace(cand, w);
      }
    }
  };

  for (int k = resolution; k >= 1; --k) {
    run_pass(static_cast<double>(k) / resolution);
    bool all_answered = true;
    for (std::size_t i = 0; i < est.nodes.size(); ++i) {
      if (answered[i]) continue;
      const int32_t x = est.nodes[i];
      if (x == center) {
        est.constants[i] = 1.0;  // zero-length curve by convention
        answered[i] = 1;
        continue;
      }
      if (level[x] >= 0.0) {
        est.constants[i] = extract_certified(x);
        answered[i] = 1;
      } else {
        all_answered = false;
      }
    }
    if (all_answered) break;
  }

  est.min_constant = 1.0;
  est.argmin = center;
  for (std::size_t i = 0; i < est.nodes.size(); ++i) {
    if (est.unreachable[i]) {
      est.constants[i] = 0.0;
      continue;  // unreachable nodes are flagged, not counted into the min
    }
    if (est.constants[i] < est.min_constant) {
      est.min_constant = est.constants[i];
      est.argmin = est.nodes[i];
    }
  }

  // store the realizing path for the argmin at the highest passing candidate
  if (est.argmin != center) {
    for (int k = resolution; k >= 1; --k) {
      run_pass(static_cast<double>(k) / resolution);
      if (level[est.argmin] >= 0.0) {
        extract_certified(est.argmin);
        est.argmin_path = path;
        break;
      }
    }
  }
  return est;
}

StabilityProbe inner_approx_curve(const MetricGraph& g, const NodeSet& U, const NodeSet& omega,
                                  const std::vector<double>& rho_list,
                                  const SolverConfig& solver) {
  if (!U.is_subset_of(omega))
    fail(ErrorKind::numeric, "invalid-collection-member", "U must be contained in Omega");
  StabilityProbe probe;
  const double diam = set_diameter(g, U);
  const auto base = variational_capacity(g, U, omega, solver);
  for (double rho : rho_list) {
    ProbeRow row;
    row.rho = rho;
    row.R = diam;
    if (rho == 0.0) {
      row.ratio = 1.0;
    } else {
      const NodeSet u_rho = eps_interior(g, U, rho, Metric::ambient);
      if (u_rho.empty()) {
        row.ratio = 0.0;
        row.flag = "empty-interior";
      } else {
        const auto shrunk = variational_capacity(g, u_rho, omega, solver);
        row.ratio = base.value > 0.0 ? shrunk.value / base.value : 0.0;
      }
    }
    row.phi = 1.0 - row.ratio;
    probe.rows.push_back(row);
  }
  return probe;
}

NodeSet neighborhood_set(const MetricGraph& g, const NodeSet& U, double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::config, "invalid-beta", "beta must be positive");
  if (U.empty()) return {};
  const double diam = set_diameter(g, U);
  if (diam == 0.0) return U;
  const auto dist = inner_distance_field(g, U);
  std::vector<int32_t> out;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (dist[v] < beta * diam) out.push_back(v);
  }
  return NodeSet(std::move(out)).set_union(U);
}

StabilityProbe stability_probe(const MetricGraph& g, const StabilityProbeParams& params) {
  if (params.members.empty())
    fail(ErrorKind::config, "empty-centers", "probe has no members");
  StabilityProbe probe;
  probe.tau = params.tau;
  probe.gamma = params.gamma;
  probe.beta = params.beta;

  for (const auto& [center, R] : params.members) {
    ProbeRow row;
    row.rho = params.rho;
    row.R = R;
    try {
      if (params.family == ProbeFamily::ordinary_balls) {
        const NodeSet small = ball_nodes(g, center, R, Metric::ambient);
        const NodeSet big = ball_nodes(g, center, R + params.rho, Metric::ambient);
        const NodeSet outer =
            ball_nodes(g, center, params.tau * (R + params.rho), Metric::ambient);
        const auto den = variational_capacity(g, big, outer, params.solver);
        const auto num = variational_capacity(g, small, outer, params.solver);
        row.ratio = den.value > 0.0 ? num.value / den.value : 0.0;
      } else {
        const auto dist = inner_distance_field(g, NodeSet(std::vector<int32_t>{center}));
        NodeSet base = ball_nodes(g, dist, R);
        NodeSet member = base;
        double outer_r = params.tau * params.gamma * R;
        if (params.family == ProbeFamily::beta_neighborhoods) {
          member = neighborhood_set(g, base, params.beta);
          outer_r = params.tau * params.gamma * (1.0 + 2.0 * params.beta) * R;
        } else if (params.family == ProbeFamily::john_family) {
          const auto john = john_lower_bound(g, base, center, 64);
          row.flag = "john_bound=" + std::to_string(john.min_constant);
        }
        const NodeSet outer = ball_nodes(g, dist, outer_r);
        if (!member.is_subset_of(outer))
          fail(ErrorKind::numeric, "invalid-collection-member",
               "member escapes its outer condenser plate");
        const auto den = variational_capacity(g, member, outer, params.solver);
        if (params.rho == 0.0) {
          row.ratio = 1.0;
        } else {
          const NodeSet shrunk = eps_interior(g, member, params.rho, Metric::ambient);
          if (shrunk.empty()) {
            row.ratio = 0.0;
            row.flag = "empty-interior";
          } else {
            const auto num = variational_capacity(g, shrunk, outer, params.solver);
            row.ratio = den.value > 0.0 ? num.value / den.value : 0.0;
          }
        }
      }
    } catch (const Error& e) {
      row.flag = e.code();
    }
    row.phi = 1.0 - row.ratio;
    probe.rows.push_back(row);
  }
  return probe;
}

}  // namespace capdens
