#include "capdens/sets.hpp"

#include <cmath>

#include "capdens/errors.hpp"

namespace capdens {

SetSpec SetSpec::make_ball(std::vector<double> center, double radius) {
  SetSpec s;
  s.kind = Kind::ball;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

SetSpec SetSpec::make_lower_half_ball(std::vector<double> center, double radius) {
  SetSpec s;
  s.kind = Kind::lower_half_ball;
  s.center = std::move(center);
  s.radius = radius;
  return s;
}

SetSpec SetSpec::make_lattice_balls(double spacing, double radius, bool exclude_slits) {
  SetSpec s;
  s.kind = Kind::lattice_balls;
  s.spacing = spacing;
  s.radius = radius;
  s.exclude_slit_neighborhood = exclude_slits;
  return s;
}

SetSpec SetSpec::make_box(std::vector<std::array<double, 2>> bounds) {
  SetSpec s;
  s.kind = Kind::box;
  s.bounds = std::move(bounds);
  return s;
}

SetSpec SetSpec::make_superlevel(const PotentialField* field, double level, bool strict) {
  SetSpec s;
  s.kind = Kind::superlevel;
  s.field = field;
  s.level = level;
  s.strict = strict;
  return s;
}

SetSpec SetSpec::make_union(std::vector<SetSpec> children) {
  SetSpec s;
  s.kind = Kind::set_union;
  s.children = std::move(children);
  return s;
}

SetSpec SetSpec::make_intersection(std::vector<SetSpec> children) {
  SetSpec s;
  s.kind = Kind::set_intersection;
  s.children = std::move(children);
  return s;
}

SetSpec SetSpec::make_complement(SetSpec child) {
  SetSpec s;
  s.kind = Kind::set_complement;
  s.children.push_back(std::move(child));
  return s;
}

namespace {

double dist2(std::span<const double> x, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t d = 0; d < x.size(); ++d) s += (x[d] - c[d]) * (x[d] - c[d]);
  return s;
}

bool lattice_center_excluded(const MetricGraph& g, std::span<const double> z) {
  return dist_to_slits(g.space, z) < 0.5;
}

bool lattice_balls_member(const MetricGraph& g, const SetSpec& s, std::span<const double> x) {
  const int n = g.dim;
  // Only lattice centers within `radius` can contain x; scan the small window.
  const int window = static_cast<int>(std::floor(s.radius / s.spacing)) + 1;
  std::vector<double> z(n);
  std::vector<int> k(n);
  std::vector<int> k0(n);
  for (int d = 0; d < n; ++d) {
    k0[d] = static_cast<int>(std::llround(x[d] / s.spacing));
    k[d] = -window;
  }
  while (true) {
    for (int d = 0; d < n; ++d) z[d] = (k0[d] + k[d]) * s.spacing;
    if (dist2(x, z) < s.radius * s.radius) {
      if (!s.exclude_slit_neighborhood || !lattice_center_excluded(g, z)) return true;
    }
    int d = 0;
    while (d < n && ++k[d] > window) {
      k[d] = -window;
      ++d;
    }
    if (d == n) return false;
  }
}

bool member(const MetricGraph& g, const SetSpec& s, int32_t v,
            std::span<const double> x) {
  switch (s.kind) {
    case SetSpec::Kind::ball:
      return dist2(x, s.center) < s.radius * s.radius;
    case SetSpec::Kind::lower_half_ball:
      return dist2(x, s.center) < s.radius * s.radius && x[g.dim - 1] <= s.center[g.dim - 1];
    case SetSpec::Kind::lattice_balls:
      return lattice_balls_member(g, s, x);
    case SetSpec::Kind::box:
      for (std::size_t d = 0; d < s.bounds.size(); ++d) {
        if (x[d] < s.bounds[d][0] || x[d] > s.bounds[d][1]) return false;
      }
      return true;
    case SetSpec::Kind::superlevel: {
      const double u = s.field->values[v];
      return s.strict ? u > s.level : u >= s.level;
    }
    case SetSpec::Kind::set_union:
      for (const auto& c : s.children) {
        if (member(g, c, v, x)) return true;
      }
      return false;
    case SetSpec::Kind::set_intersection:
      for (const auto& c : s.children) {
        if (!member(g, c, v, x)) return false;
      }
      return true;
    case SetSpec::Kind::set_complement:
      return !member(g, s.children[0], v, x);
  }
  return false;
}

void validate(const MetricGraph& g, const SetSpec& s) {
  switch (s.kind) {
    case SetSpec::Kind::ball:
    case SetSpec::Kind::lower_half_ball:
      if (s.radius <= 0.0) fail(ErrorKind::config, "invalid-set", "ball radius must be positive");
      if (static_cast<int>(s.center.size()) != g.dim)
        fail(ErrorKind::config, "invalid-set", "ball center dimension mismatch");
      break;
    case SetSpec::Kind::lattice_balls:
      if (s.radius <= 0.0 || s.spacing <= 0.0)
        fail(ErrorKind::config, "invalid-set", "lattice spacing and radius must be positive");
      break;
    case SetSpec::Kind::box:
      if (static_cast<int>(s.bounds.size()) != g.dim)
        fail(ErrorKind::config, "invalid-set", "box dimension mismatch");
      break;
    case SetSpec::Kind::superlevel:
      if (s.field == nullptr)
        fail(ErrorKind::config, "invalid-set", "superlevel spec without a potential");
      if (s.field->graph_id != g.id)
        fail(ErrorKind::numeric, "mismatched-graph",
             "superlevel spec references a potential from a different graph");
      break;
    default:
      for (const auto& c : s.children) validate(g, c);
      break;
  }
}

}  // namespace

NodeSet rasterize_set(const MetricGraph& g, const SetSpec& spec) {
  validate(g, spec);
  std::vector<int32_t> out;
  for (int32_t v = 0; v < g.node_count(); ++v) {
    if (member(g, spec, v, g.node_coords(v))) out.push_back(v);
  }
  return NodeSet(std::move(out));
}

}  // namespace capdens
