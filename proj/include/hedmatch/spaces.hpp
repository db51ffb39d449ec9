#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hedmatch/matrix.hpp"

namespace hedmatch {

// A compact quality space, discretized as an ordered list of atoms in R^dim.
// Invariants (non-empty, uniform dimension, distinct points) are checked by
// validate_instance rather than enforced here, so malformed input can be
// reported in full.
struct SpaceGrid {
  std::size_t dim = 1;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  const Point& operator[](Index i) const { return points[i]; }

  // Convenience for 1D grids.
  static SpaceGrid line(const std::vector<double>& coords);
  // `count` equally spaced atoms from `lo` to `hi` inclusive.
  static SpaceGrid linspace(double lo, double hi, std::size_t count);
};

// Non-negative weights, one per atom of an associated grid.
struct DiscreteMeasure {
  std::vector<double> weights;
  double total_mass = 0.0;

  // Caches the total with an ascending-index sum.
  static DiscreteMeasure from_weights(std::vector<double> weights);
  static DiscreteMeasure uniform(std::size_t count, double total = 1.0);

  std::size_t size() const { return weights.size(); }
  double operator[](Index i) const { return weights[i]; }
};

// Ascending-index sum; every weight total in the library goes through here.
double ordered_sum(std::span<const double> values);

// Image measure of `m` under `map` on a target grid of `target_size` atoms.
// Atoms of zero weight may carry any index. Throws kInvalidMap if a
// positively weighted atom maps outside the target grid, kLengthMismatch if
// map and measure disagree in length. The result carries the source total.
DiscreteMeasure pushforward(std::span<const Index> map, const DiscreteMeasure& m,
                            std::size_t target_size);

// Half the l1 distance between two weight vectors on the same grid.
double tv_distance(std::span<const double> a, std::span<const double> b);
double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

// Tensor-product structure of a regular grid: axis a has `count[a]` values
// start[a] + k * spacing[a]. `lookup` maps a flattened multi-index (axis 0
// fastest) to the atom index in the original ordering.
struct RegularGrid {
  std::vector<double> start;
  std::vector<double> spacing;
  std::vector<std::size_t> count;
  std::vector<Index> lookup;

  std::size_t dim() const { return count.size(); }
  Index atom(const std::vector<std::size_t>& multi) const;
  // Inverse of `atom` for every atom of the grid.
  std::vector<std::vector<std::size_t>> multi_indices() const;
};

// Recognizes regular tensor-product grids regardless of atom order.
// Relative spacing tolerance 1e-9.
std::optional<RegularGrid> detect_regular_grid(const SpaceGrid& grid);

}  // namespace hedmatch
