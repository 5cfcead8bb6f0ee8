#include "capdens/grid.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "capdens/errors.hpp"

namespace capdens {

namespace {
std::atomic<uint64_t> next_graph_id{1};
}

double MetricGraph::total_measure() const {
  double s = 0.0;
  for (double m : measure) s += m;
  return s;
}

int64_t MetricGraph::lattice_index(std::span<const int> idx) const {
  int64_t c = 0;
  for (int d = 0; d < dim; ++d) c += stride[d] * idx[d];
  return c;
}

void MetricGraph::lattice_coords(int64_t cell, std::span<int> idx) const {
  for (int d = dim - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(cell / stride[d]);
    cell -= idx[d] * stride[d];
  }
}

int32_t MetricGraph::node_at(std::span<const int> idx) const {
  for (int d = 0; d < dim; ++d) {
    if (idx[d] < 0 || idx[d] >= cells[d]) return -1;
  }
  return cell_to_node[lattice_index(idx)];
}

int32_t MetricGraph::nearest_node(std::span<const double> x) const {
  int32_t best = -1;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (int32_t v = 0; v < node_count(); ++v) {
    const auto c = node_coords(v);
    double d2 = 0.0;
    for (int d = 0; d < dim; ++d) d2 += (c[d] - x[d]) * (c[d] - x[d]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = v;
    }
  }
  return best;
}

double MetricGraph::euclidean(int32_t a, int32_t b) const {
  return euclidean_to(a, node_coords(b));
}

double MetricGraph::euclidean_to(int32_t a, std::span<const double> x) const {
  const auto c = node_coords(a);
  double d2 = 0.0;
  for (int d = 0; d < dim; ++d) d2 += (c[d] - x[d]) * (c[d] - x[d]);
  return std::sqrt(d2);
}

MetricGraph build_graph(const SpaceSpec& space, const Box& box, double h) {
  const int dim = space.dimension();
  if (h <= 0.0) fail(ErrorKind::config, "resolution-too-coarse", "grid spacing must be positive");
  if (box.dim() != dim)
    fail(ErrorKind::config, "empty-domain", "box dimension does not match the space");
  for (int d = 0; d < dim; ++d) {
    if (!(box.extent(d) > 0.0))
      fail(ErrorKind::config, "empty-domain", "box has nonpositive extent");
    if (h > box.extent(d))
      fail(ErrorKind::config, "resolution-too-coarse", "grid spacing exceeds a box extent");
  }

  MetricGraph g;
  g.space = space;
  g.box = box;
  g.h = h;
  g.dim = dim;
  g.cells.resize(dim);
  g.origin.resize(dim);
  g.stride.resize(dim);
  int64_t total = 1;
  for (int d = 0; d < dim; ++d) {
    g.origin[d] = box.bounds[d][0];
    g.cells[d] = static_cast<int>(std::floor(box.extent(d) / h + 1e-9)) + 1;
    g.stride[d] = total;
    total *= g.cells[d];
  }

  g.cell_to_node.assign(total, -1);
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  std::vector<double> sample(dim);
  const int sub = static_cast<int>(std::llround(std::pow(3.0, dim)));

  for (int64_t cell = 0; cell < total; ++cell) {
    int64_t rem = cell;
    for (int d = 0; d < dim; ++d) {
      idx[d] = static_cast<int>(rem % g.cells[d]);
      rem /= g.cells[d];
      x[d] = g.origin[d] + idx[d] * h;
    }
    if (!space.contains(x)) continue;

    // Cell fraction inside the space from 3 subsamples per axis (subcell centers).
    int inside = 0;
    for (int s = 0; s < sub; ++s) {
      int t = s;
      for (int d = 0; d < dim; ++d) {
        sample[d] = x[d] + (t % 3 - 1) * (h / 3.0);
        t /= 3;
      }
      if (space.contains(sample)) ++inside;
    }
    const int32_t v = static_cast<int32_t>(g.coords.size() / dim);
    g.cell_to_node[cell] = v;
    g.coords.insert(g.coords.end(), x.begin(), x.end());
    g.measure.push_back(std::pow(h, dim) * inside / sub);
    g.node_cell.push_back(cell);
  }

  if (g.measure.empty())
    fail(ErrorKind::config, "empty-domain", "no lattice point of the box lies in the space");

  const int32_t n = g.node_count();
  g.adj_offset.assign(n + 1, 0);
  std::vector<int> nidx(dim);
  for (int32_t v = 0; v < n; ++v) {
    g.lattice_coords(g.node_cell[v], nidx);
    int degree = 0;
    for (int d = 0; d < dim; ++d) {
      for (int s : {-1, 1}) {
        nidx[d] += s;
        if (g.node_at(nidx) >= 0) ++degree;
        nidx[d] -= s;
      }
    }
    g.adj_offset[v + 1] = g.adj_offset[v] + degree;
  }
  g.adj_node.resize(g.adj_offset[n]);
  for (int32_t v = 0; v < n; ++v) {
    g.lattice_coords(g.node_cell[v], nidx);
    int32_t at = g.adj_offset[v];
    for (int d = 0; d < dim; ++d) {
      for (int s : {-1, 1}) {
        nidx[d] += s;
        const int32_t w = g.node_at(nidx);
        if (w >= 0) g.adj_node[at++] = w;
        nidx[d] -= s;
      }
    }
  }

  g.id = next_graph_id.fetch_add(1);
  return g;
}

std::vector<int32_t> connected_components(const MetricGraph& g, int32_t* count) {
  const int32_t n = g.node_count();
  std::vector<int32_t> comp(n, -1);
  std::vector<int32_t> stack;
  int32_t c = 0;
  for (int32_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    stack.push_back(s);
    comp[s] = c;
    while (!stack.empty()) {
      const int32_t v = stack.back();
      stack.pop_back();
      for (int32_t k = g.adj_offset[v]; k < g.adj_offset[v + 1]; ++k) {
        const int32_t w = g.adj_node[k];
        if (comp[w] < 0) {
          comp[w] = c;
          stack.push_back(w);
        }
      }
    }
    ++c;
  }
  if (count != nullptr) *count = c;
  return comp;
}

}  // namespace capdens
