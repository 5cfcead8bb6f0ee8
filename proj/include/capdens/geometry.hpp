#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace capdens {

/// Axis-aligned box, one [lo, hi] interval per axis.
struct Box {
  std::vector<std::array<double, 2>> bounds;

  int dim() const { return static_cast<int>(bounds.size()); }
  double extent(int axis) const { return bounds[axis][1] - bounds[axis][0]; }
  bool contains(std::span<const double> x) const;
};

/// Full axis-aligned box: the space is exactly its (closed) bounds.
struct EuclideanBox {
  std::vector<std::array<double, 2>> bounds;
};

/// R^n with the open upper half-balls B+(c_j, R_j) removed, c_j = (4^j, 0, ..., 0),
/// R_j = 2^j for 1 <= j <= slit_count. "Upper" means last coordinate above the center's.
struct SlitSpace {
  int dimension = 2;
  int slit_count = 4;
};

/// { (x, y) : |y - cos x| <= 1/2 } restricted to an x-range.
struct CosineStrip {
  double x_min = 0.0;
  double x_max = 1.0;
};

struct SpaceSpec {
  std::variant<EuclideanBox, SlitSpace, CosineStrip> shape;

  int dimension() const;
  bool contains(std::span<const double> x) const;
  bool is_slit_space() const { return std::holds_alternative<SlitSpace>(shape); }
};

/// Center of the j-th removed half-ball (1-based), padded to dim coordinates.
std::vector<double> slit_center(int j, int dim);
double slit_radius(int j);

/// Euclidean distance from a point to the closed upper half-ball at (center, radius).
double dist_to_upper_half_ball(std::span<const double> x, std::span<const double> center,
                               double radius);

/// Distance to the union of the removed half-balls of a slit space (+inf when none).
double dist_to_slits(const SpaceSpec& space, std::span<const double> x);

}  // namespace capdens
