#include "hedmatch/instance.hpp"

#include <cmath>
#include <set>
#include <string>

namespace hedmatch {
namespace {

void check_grid(const SpaceGrid& g, const std::string& name, ValidationReport& out) {
  if (g.size() == 0) {
    out.push_back({ViolationCode::kEmptyGrid, name + " grid is empty"});
    return;
  }
  if (g.dim == 0) {
    out.push_back({ViolationCode::kBadDimension, name + " grid has dimension 0"});
    return;
  }
  std::set<Point> seen;
  for (Index i = 0; i < g.size(); ++i) {
    const Point& p = g.points[i];
    if (p.size() != g.dim) {
      out.push_back({ViolationCode::kBadDimension,
                     name + " atom " + std::to_string(i) + " has " + std::to_string(p.size()) +
                         " coordinates, expected " + std::to_string(g.dim)});
      continue;
    }
    for (double c : p) {
      if (!std::isfinite(c)) {
        out.push_back({ViolationCode::kNonFiniteCoordinate,
                       name + " atom " + std::to_string(i) + " has a non-finite coordinate"});
        break;
      }
    }
    if (!seen.insert(p).second) {
      out.push_back({ViolationCode::kDuplicatePoint,
                     name + " atom " + std::to_string(i) + " repeats an earlier point"});
    }
  }
}

void check_measure(const DiscreteMeasure& m, const SpaceGrid& g, const std::string& name,
                   ValidationReport& out) {
  if (m.size() != g.size()) {
    out.push_back({ViolationCode::kMeasureSize, name + " has " + std::to_string(m.size()) +
                                                    " weights for " +
                                                    std::to_string(g.size()) + " atoms"});
  }
  bool finite = true;
  for (Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.weights[i])) {
      finite = false;
      out.push_back({ViolationCode::kNonFiniteWeight,
                     name + " weight " + std::to_string(i) + " is not finite"});
    } else if (m.weights[i] < 0.0) {
      out.push_back({ViolationCode::kNegativeWeight,
                     name + " weight " + std::to_string(i) + " is negative"});
    }
  }
  if (finite) {
    const double sum = ordered_sum(m.weights);
    if (std::abs(sum - m.total_mass) > 1e-12 * std::max(1.0, std::abs(sum))) {
      out.push_back({ViolationCode::kCachedMassMismatch,
                     name + " cached total does not match the sum of weights"});
    }
  }
}

void check_cost(const CostSpec& c, const SpaceGrid& source, const SpaceGrid& z,
                const std::string& name, ValidationReport& out) {
  if (c.sign != 1 && c.sign != -1) {
    out.push_back({ViolationCode::kBadSign, name + " sign must be +1 or -1"});
  }
  switch (c.family) {
    case CostFamily::kScaledQuadratic:
    case CostFamily::kPower:
      if (!(c.alpha > 0.0) || !std::isfinite(c.alpha)) {
        out.push_back({ViolationCode::kBadAlpha, name + " alpha must be positive"});
      }
      [[fallthrough]];
    case CostFamily::kBilinear:
      if (source.dim != z.dim) {
        out.push_back({ViolationCode::kBadDimension,
                       name + " pairs a " + std::to_string(source.dim) + "-dimensional space with " +
                           std::to_string(z.dim) + "-dimensional Z"});
      }
      break;
    case CostFamily::kTable:
      if (c.table.rows() != source.size() || c.table.cols() != z.size()) {
        out.push_back({ViolationCode::kTableShape,
                       name + " table is " + std::to_string(c.table.rows()) + "x" +
                           std::to_string(c.table.cols()) + ", expected " +
                           std::to_string(source.size()) + "x" + std::to_string(z.size())});
      }
      break;
  }
}

}  // namespace

const char* to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kEmptyGrid: return "empty-grid";
    case ViolationCode::kBadDimension: return "bad-dimension";
    case ViolationCode::kDuplicatePoint: return "duplicate-point";
    case ViolationCode::kNegativeWeight: return "negative-weight";
    case ViolationCode::kNonFiniteWeight: return "non-finite-weight";
    case ViolationCode::kCachedMassMismatch: return "cached-mass-mismatch";
    case ViolationCode::kMeasureSize: return "measure-size";
    case ViolationCode::kMassMismatch: return "mass-mismatch";
    case ViolationCode::kBadSign: return "bad-sign";
    case ViolationCode::kBadAlpha: return "bad-alpha";
    case ViolationCode::kTableShape: return "table-shape";
    case ViolationCode::kNonFiniteCoordinate: return "non-finite-coordinate";
  }
  return "unknown";
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport out;
  check_grid(inst.x_grid, "x", out);
  check_grid(inst.y_grid, "y", out);
  check_grid(inst.z_grid, "z", out);
  check_measure(inst.mu, inst.x_grid, "mu", out);
  check_measure(inst.nu, inst.y_grid, "nu", out);

  const double a = inst.mu.total_mass;
  const double b = inst.nu.total_mass;
  if (!(std::abs(a - b) <= kMassBalanceTol * std::max(1.0, std::abs(a)))) {
    out.push_back({ViolationCode::kMassMismatch, "mu has total mass " + std::to_string(a) +
                                                     ", nu has " + std::to_string(b)});
  }
  check_cost(inst.u_cost, inst.x_grid, inst.z_grid, "u", out);
  check_cost(inst.v_cost, inst.y_grid, inst.z_grid, "v", out);
  return out;
}

Problem::Problem(Instance inst)
    : inst_(std::move(inst)),
      u_(cost_matrix(inst_.u_cost, inst_.x_grid, inst_.z_grid)),
      v_(cost_matrix(inst_.v_cost, inst_.y_grid, inst_.z_grid)) {}

}  // namespace hedmatch
