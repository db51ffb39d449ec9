#include "hedmatch/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "hedmatch/error.hpp"

namespace hedmatch {

SpaceGrid SpaceGrid::line(const std::vector<double>& coords) {
  SpaceGrid g;
  g.dim = 1;
  g.points.reserve(coords.size());
  for (double c : coords) g.points.push_back({c});
  return g;
}

SpaceGrid SpaceGrid::linspace(double lo, double hi, std::size_t count) {
  std::vector<double> coords(count);
  for (std::size_t i = 0; i < count; ++i) {
    coords[i] = count == 1 ? lo
                           : lo + (hi - lo) * static_cast<double>(i) /
                                      static_cast<double>(count - 1);
  }
  return line(coords);
}

double ordered_sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

DiscreteMeasure DiscreteMeasure::from_weights(std::vector<double> weights) {
  DiscreteMeasure m;
  m.total_mass = ordered_sum(weights);
  m.weights = std::move(weights);
  return m;
}

DiscreteMeasure DiscreteMeasure::uniform(std::size_t count, double total) {
  return from_weights(std::vector<double>(count, total / static_cast<double>(count)));
}

DiscreteMeasure pushforward(std::span<const Index> map, const DiscreteMeasure& m,
                            std::size_t target_size) {
  if (map.size() != m.size()) {
    throw Error(ErrorKind::kLengthMismatch,
                "map has " + std::to_string(map.size()) + " entries for a measure of " +
                    std::to_string(m.size()) + " atoms");
  }
  DiscreteMeasure out;
  out.weights.assign(target_size, 0.0);
  for (Index i = 0; i < map.size(); ++i) {
    if (m.weights[i] == 0.0) continue;
    if (map[i] >= target_size) {
      throw Error(ErrorKind::kInvalidMap, "atom " + std::to_string(i) + " maps to index " +
                                              std::to_string(map[i]) + " outside [0, " +
                                              std::to_string(target_size) + ")");
    }
    out.weights[map[i]] += m.weights[i];
  }
  out.total_mass = m.total_mass;
  return out;
}

double tv_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kLengthMismatch, "tv_distance: measures of sizes " +
                                                std::to_string(a.size()) + " and " +
                                                std::to_string(b.size()));
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return 0.5 * total;
}

double tv_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return tv_distance(a.weights, b.weights);
}

Index RegularGrid::atom(const std::vector<std::size_t>& multi) const {
  std::size_t flat = 0;
  std::size_t stride = 1;
  for (std::size_t a = 0; a < count.size(); ++a) {
    flat += multi[a] * stride;
    stride *= count[a];
  }
  return lookup[flat];
}

std::vector<std::vector<std::size_t>> RegularGrid::multi_indices() const {
  std::vector<std::vector<std::size_t>> out(lookup.size());
  for (std::size_t flat = 0; flat < lookup.size(); ++flat) {
    std::vector<std::size_t> multi(count.size());
    std::size_t rest = flat;
    for (std::size_t a = 0; a < count.size(); ++a) {
      multi[a] = rest % count[a];
      rest /= count[a];
    }
    out[lookup[flat]] = std::move(multi);
  }
  return out;
}

std::optional<RegularGrid> detect_regular_grid(const SpaceGrid& grid) {
  constexpr double kRelTol = 1e-9;
  if (grid.size() == 0 || grid.dim == 0) return std::nullopt;
  for (const auto& p : grid.points) {
    if (p.size() != grid.dim) return std::nullopt;
  }

  RegularGrid rg;
  std::vector<std::vector<double>> axis_values(grid.dim);
  for (std::size_t a = 0; a < grid.dim; ++a) {
    std::vector<double> vals;
    vals.reserve(grid.size());
    for (const auto& p : grid.points) vals.push_back(p[a]);
    std::sort(vals.begin(), vals.end());
    const double span = vals.back() - vals.front();
    const double merge = kRelTol * std::max(1.0, std::abs(span));
    std::vector<double> unique;
    for (double v : vals) {
      if (unique.empty() || v - unique.back() > merge) unique.push_back(v);
    }
    const double h = unique.size() > 1 ? span / static_cast<double>(unique.size() - 1) : 1.0;
    for (std::size_t k = 1; k < unique.size(); ++k) {
      if (std::abs(unique[k] - unique[k - 1] - h) > kRelTol * std::max(1.0, h) + merge) {
        return std::nullopt;
      }
    }
    rg.start.push_back(unique.front());
    rg.spacing.push_back(h);
    rg.count.push_back(unique.size());
  }

  std::size_t total = 1;
  for (auto c : rg.count) total *= c;
  if (total != grid.size()) return std::nullopt;

  constexpr Index kUnset = static_cast<Index>(-1);
  rg.lookup.assign(total, kUnset);
  for (Index i = 0; i < grid.size(); ++i) {
    std::size_t flat = 0;
    std::size_t stride = 1;
    for (std::size_t a = 0; a < grid.dim; ++a) {
      const double pos = (grid.points[i][a] - rg.start[a]) / rg.spacing[a];
      const double k = std::round(pos);
      if (std::abs(pos - k) > 1e-6) return std::nullopt;
      flat += static_cast<std::size_t>(k) * stride;
      stride *= rg.count[a];
    }
    if (rg.lookup[flat] != kUnset) return std::nullopt;
    rg.lookup[flat] = i;
  }
  return rg;
}

}  // namespace hedmatch
