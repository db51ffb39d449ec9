#pragma once

#include <string>
#include <vector>

#include "hedmatch/costs.hpp"
#include "hedmatch/spaces.hpp"

namespace hedmatch {

// Relative tolerance on mu(X) = nu(Y).
inline constexpr double kMassBalanceTol = 1e-9;

struct Instance {
  SpaceGrid x_grid;
  SpaceGrid y_grid;
  SpaceGrid z_grid;
  DiscreteMeasure mu;
  DiscreteMeasure nu;
  CostSpec u_cost;
  CostSpec v_cost;
};

enum class ViolationCode {
  kEmptyGrid,
  kBadDimension,
  kDuplicatePoint,
  kNegativeWeight,
  kNonFiniteWeight,
  kCachedMassMismatch,
  kMeasureSize,
  kMassMismatch,
  kBadSign,
  kBadAlpha,
  kTableShape,
  kNonFiniteCoordinate,
};

const char* to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

ValidationReport validate_instance(const Instance& inst);

// Instance together with its evaluated cost tables. Every solver stage works
// on a Problem so costs are evaluated once.
class Problem {
 public:
  explicit Problem(Instance inst);

  const Instance& instance() const { return inst_; }
  const SpaceGrid& x_grid() const { return inst_.x_grid; }
  const SpaceGrid& y_grid() const { return inst_.y_grid; }
  const SpaceGrid& z_grid() const { return inst_.z_grid; }
  const DiscreteMeasure& mu() const { return inst_.mu; }
  const DiscreteMeasure& nu() const { return inst_.nu; }

  // u(x, z), rows over X.
  const Matrix& u() const { return u_; }
  // v(y, z), rows over Y.
  const Matrix& v() const { return v_; }

  std::size_t nx() const { return inst_.x_grid.size(); }
  std::size_t ny() const { return inst_.y_grid.size(); }
  std::size_t nz() const { return inst_.z_grid.size(); }

 private:
  Instance inst_;
  Matrix u_;
  Matrix v_;
};

}  // namespace hedmatch
