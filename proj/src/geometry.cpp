#include "capdens/geometry.hpp"

#include <cmath>
#include <limits>

#include "capdens/errors.hpp"

namespace capdens {

bool Box::contains(std::span<const double> x) const {
  for (int d = 0; d < dim(); ++d) {
    if (x[d] < bounds[d][0] || x[d] > bounds[d][1]) return false;
  }
  return true;
}

int SpaceSpec::dimension() const {
  if (const auto* b = std::get_if<EuclideanBox>(&shape)) return static_cast<int>(b->bounds.size());
  if (const auto* s = std::get_if<SlitSpace>(&shape)) return s->dimension;
  return 2;
}

std::vector<double> slit_center(int j, int dim) {
  std::vector<double> c(dim, 0.0);
  c[0] = std::pow(4.0, j);
  return c;
}

double slit_radius(int j) { return std::pow(2.0, j); }

double dist_to_upper_half_ball(std::span<const double> x, std::span<const double> center,
                               double radius) {
  // Distance to the convex set cl(B(c,R)) ∩ {last coord >= c_last}:
  // clamp the last coordinate of x-c into the half-space, then measure the
  // radial excess and the clamped drop separately.
  const int n = static_cast<int>(x.size());
  double drop = center[n - 1] - x[n - 1];
  if (drop < 0.0) drop = 0.0;
  double norm2 = 0.0;
  for (int d = 0; d < n - 1; ++d) {
    const double v = x[d] - center[d];
    norm2 += v * v;
  }
  double vlast = x[n - 1] - center[n - 1];
  if (vlast < 0.0) vlast = 0.0;
  norm2 += vlast * vlast;
  double radial = std::sqrt(norm2) - radius;
  if (radial < 0.0) radial = 0.0;
  return std::hypot(radial, drop);
}

double dist_to_slits(const SpaceSpec& space, std::span<const double> x) {
  const auto* s = std::get_if<SlitSpace>(&space.shape);
  if (s == nullptr) return std::numeric_limits<double>::infinity();
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= s->slit_count; ++j) {
    const auto c = slit_center(j, s->dimension);
    best = std::min(best, dist_to_upper_half_ball(x, c, slit_radius(j)));
  }
  return best;
}

namespace {

bool in_slit_space(const SlitSpace& s, std::span<const double> x) {
  const int n = s.dimension;
  for (int j = 1; j <= s.slit_count; ++j) {
    const double cx = std::pow(4.0, j);
    const double r = slit_radius(j);
    if (x[n - 1] <= 0.0) continue;  // slit centers sit at last coordinate 0
    double d2 = (x[0] - cx) * (x[0] - cx);
    for (int d = 1; d < n; ++d) d2 += x[d] * x[d];
    if (d2 < r * r) return false;
  }
  return true;
}

}  // namespace

bool SpaceSpec::contains(std::span<const double> x) const {
  if (const auto* b = std::get_if<EuclideanBox>(&shape)) {
    for (std::size_t d = 0; d < b->bounds.size(); ++d) {
      if (x[d] < b->bounds[d][0] || x[d] > b->bounds[d][1]) return false;
    }
    return true;
  }
  if (const auto* s = std::get_if<SlitSpace>(&shape)) return in_slit_space(*s, x);
  const auto& strip = std::get<CosineStrip>(shape);
  if (x[0] < strip.x_min || x[0] > strip.x_max) return false;
  return std::fabs(x[1] - std::cos(x[0])) <= 0.5;
}

}  // namespace capdens
