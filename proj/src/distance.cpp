#include "capdens/distance.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

#include "capdens/errors.hpp"

namespace capdens {

namespace {

// 1D lower-envelope pass of the squared-distance transform (Felzenszwalb).
// f: squared distances along a lattice line; exact for lattice sites.
void dt_line(const double* f, double* out, int n, std::vector<int>& v, std::vector<double>& z) {
  v.resize(n);
  z.resize(n + 1);
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    if (f[q] == kInf) continue;
    if (f[v[0]] == kInf) {
      v[0] = q;
      continue;
    }
    double s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) / (2.0 * (q - v[k]));
    while (k > 0 && s <= z[k]) {
      --k;
      s = ((f[q] + q * double(q)) - (f[v[k]] + v[k] * double(v[k]))) / (2.0 * (q - v[k]));
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  if (f[v[0]] == kInf) {
    for (int q = 0; q < n; ++q) out[q] = kInf;
    return;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double dq = q - double(v[k]);
    out[q] = dq * dq + f[v[k]];
  }
}

// Full-lattice squared EDT in cell units; entries without seeds stay +inf.
void dt_lattice(const MetricGraph& g, std::vector<double>& field) {
  std::vector<double> line, out;
  std::vector<int> hull;
  std::vector<double> breaks;
  for (int axis = 0; axis < g.dim; ++axis) {
    const int n = g.cells[axis];
    const int64_t step = g.stride[axis];
    line.resize(n);
    out.resize(n);
    // iterate all lines along `axis`
    int64_t lines = 1;
    for (int d = 0; d < g.dim; ++d) {
      if (d != axis) lines *= g.cells[d];
    }
    std::vector<int> idx(g.dim, 0);
    for (int64_t li = 0; li < lines; ++li) {
      int64_t rem = li;
      int64_t base = 0;
      for (int d = 0; d < g.dim; ++d) {
        if (d == axis) continue;
        const int c = static_cast<int>(rem % g.cells[d]);
        rem /= g.cells[d];
        base += g.stride[d] * c;
      }
      for (int q = 0; q < n; ++q) line[q] = field[base + step * q];
      dt_line(line.data(), out.data(), n, hull, breaks);
      for (int q = 0; q < n; ++q) field[base + step * q] = out[q];
    }
  }
}

struct StencilOffset {
  std::vector<int> delta;
  double length;  // in units of h
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

std::vector<double> ambient_distance_field(const MetricGraph& g, const NodeSet& seeds) {
  std::vector<double> lattice(g.cell_to_node.size(), kInf);
  for (int32_t v : seeds) lattice[g.node_cell[v]] = 0.0;
  dt_lattice(g, lattice);
  std::vector<double> dist(g.node_count(), kInf);
  for (int32_t v = 0; v < g.node_count(); ++v) {
    const double d2 = lattice[g.node_cell[v]];
    dist[v] = d2 == kInf ? kInf : g.h * std::sqrt(d2);
  }
  return dist;
}

std::vector<double> inner_distance_field(const MetricGraph& g, const NodeSet& sources,
                                         const NodeSet* mask) {
  if (sources.empty()) fail(ErrorKind::numeric, "empty-source", "no source nodes given");
  const int32_t n = g.node_count();
  std::vector<uint8_t> allowed;
  if (mask != nullptr) allowed = mask->mask(n);

  std::vector<double> dist(n, kInf);
  using Item = std::pair<double, int32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (int32_t v : sources) {
    if (mask != nullptr && !allowed[v]) continue;
    dist[v] = 0.0;
    heap.emplace(0.0, v);
  }

  const auto offsets = full_stencil(g.dim);
  std::vector<int> idx(g.dim), nidx(g.dim);
  while (!heap.empty()) {
    const auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    g.lattice_coords(g.node_cell[v], idx);
    for (const auto& o : offsets) {
      for (int a = 0; a < g.dim; ++a) nidx[a] = idx[a] + o.delta[a];
      const int32_t w = g.node_at(nidx);
      if (w < 0) continue;
      if (mask != nullptr && !allowed[w]) continue;
      const double nd = d + o.length * g.h;
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

std::vector<double> distance_field(const MetricGraph& g, const NodeSet& seeds, Metric metric) {
  if (metric == Metric::ambient) return ambient_distance_field(g, seeds);
  return inner_distance_field(g, seeds);
}

NodeSet ball_nodes(const MetricGraph& g, const std::vector<double>& center_dist, double r) {
  std::vector<int32_t> out;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (center_dist[v] < r) out.push_back(v);
  }
  return NodeSet(std::move(out));
}

NodeSet ball_nodes(const MetricGraph& g, int32_t center, double r, Metric metric) {
  if (center < 0 || center >= g.node_count())
    fail(ErrorKind::numeric, "invalid-node", "ball center is not a node of the graph");
  if (metric == Metric::ambient) {
    const auto c = g.node_coords(center);
    std::vector<int32_t> out;
    for (int32_t v = 0; v < g.node_count(); ++v) {
      if (g.euclidean_to(v, c) < r) out.push_back(v);
    }
    return NodeSet(std::move(out));
  }
  NodeSet src(std::vector<int32_t>{center});
  return ball_nodes(g, inner_distance_field(g, src), r);
}

NodeSet eps_interior(const MetricGraph& g, const NodeSet& U, double eps, Metric metric) {
  if (U.empty()) return {};
  const NodeSet comp = U.complement(g.node_count());
  if (comp.empty()) return U;  // no node-complement: every node is eps-deep
  const auto dist = distance_field(g, comp, metric);
  std::vector<int32_t> out;
  for (int32_t v : U) {
    if (dist[v] > eps) out.push_back(v);
  }
  return NodeSet(std::move(out));
}

NodeSet eps_neighborhood(const MetricGraph& g, const NodeSet& U, double eps, Metric metric) {
  if (U.empty()) return {};
  if (eps == 0.0) return U;
  const auto dist = distance_field(g, U, metric);
  std::vector<int32_t> out;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (dist[v] < eps) out.push_back(v);
  }
  return NodeSet(std::move(out)).set_union(U);
}

QuasiconvexityEstimate quasiconvexity_estimate(const MetricGraph& g, int sample_pairs,
                                               uint64_t seed) {
  QuasiconvexityEstimate est;
  const int32_t n = g.node_count();
  if (n < 2 || sample_pairs <= 0) return est;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int32_t> pick(0, n - 1);

  for (int s = 0; s < sample_pairs; ++s) {
    const int32_t a = pick(rng);
    const int32_t b = pick(rng);
    if (a == b) continue;
    ++est.sampled_pairs;
    const auto dist = inner_distance_field(g, NodeSet(std::vector<int32_t>{a}));
    const double din = dist[b];
    const double d = g.euclidean(a, b);
    const double ratio = din / d;
    if (ratio > est.L) {
      est.L = ratio;
      est.witness_a = a;
      est.witness_b = b;
      est.disconnected_pair = !(din < kInf);
    }
  }
  return est;
}

double set_diameter(const MetricGraph& g, const NodeSet& U) {
  // Max distance is attained on the boundary layer of U; restricting to it
  // keeps the pair scan tractable on fine grids.
  std::vector<int32_t> rim;
  std::vector<int> idx(g.dim), nidx(g.dim);
  const auto in_u = U.mask(g.node_count());
  for (int32_t v : U) {
    bool boundary = false;
    g.lattice_coords(g.node_cell[v], idx);
    for (int d = 0; d < g.dim && !boundary; ++d) {
      for (int s : {-1, 1}) {
        for (int a = 0; a < g.dim; ++a) nidx[a] = idx[a];
        nidx[d] += s;
        const int32_t w = g.node_at(nidx);
        if (w < 0 || !in_u[w]) {
          boundary = true;
          break;
        }
      }
    }
    if (boundary) rim.push_back(v);
  }
  double best = 0.0;
  for (std::size_t i = 0; i < rim.size(); ++i) {
    for (std::size_t j = i + 1; j < rim.size(); ++j) {
      best = std::max(best, g.euclidean(rim[i], rim[j]));
    }
  }
  return best;
}

}  // namespace capdens
