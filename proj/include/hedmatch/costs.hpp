#pragma once

#include <string>
#include <vector>

#include "hedmatch/matrix.hpp"
#include "hedmatch/spaces.hpp"

namespace hedmatch {

enum class CostFamily { kBilinear, kScaledQuadratic, kPower, kTable };

const char* to_string(CostFamily family);

// A benefit function c(source, z).
//   bilinear:          sign * <x, z>
//   scaled_quadratic:  sign * (alpha / 2) * |x - z|^2
//   power:             sign * |x - z|^alpha
//   table:             values(source index, z index)
struct CostSpec {
  CostFamily family = CostFamily::kScaledQuadratic;
  int sign = 1;
  double alpha = 1.0;
  Matrix table;

  static CostSpec bilinear(int sign = 1);
  static CostSpec scaled_quadratic(int sign, double alpha);
  static CostSpec power(int sign, double alpha);
  static CostSpec tabulated(Matrix values);

  bool analytic() const { return family != CostFamily::kTable; }
};

double eval_cost(const CostSpec& spec, const Point& source, const Point& z);

// Index-based evaluation; the only route for table costs.
double eval_cost(const CostSpec& spec, const SpaceGrid& source_grid, Index source,
                 const SpaceGrid& z_grid, Index z);

// All pairs; rows follow source_grid, columns follow z_grid.
Matrix cost_matrix(const CostSpec& spec, const SpaceGrid& source_grid,
                   const SpaceGrid& z_grid);

// Gradient with respect to the source point. Throws kUnsupported for table
// costs and kSingularPoint for the power family at source == z.
Point eval_cost_gradient_x(const CostSpec& spec, const Point& source, const Point& z);

enum class CheckStatus { kPass, kFail, kPassWithWarning };

const char* to_string(CheckStatus status);

struct GradientCollision {
  Index source = 0;
  Index z_first = 0;
  Index z_second = 0;
};

struct CheckReport {
  CheckStatus status = CheckStatus::kPass;
  std::vector<GradientCollision> witnesses;
  std::string message;

  bool passed() const { return status != CheckStatus::kFail; }
};

// Two z atoms whose source-gradients differ by at most this are a collision.
inline constexpr double kGradientCollisionTol = 1e-10;

// Injectivity of z -> D_x c(x, z) at every source atom.
CheckReport spence_mirrlees_check(const CostSpec& spec, const SpaceGrid& source_grid,
                                  const SpaceGrid& z_grid);

// max |D_x c(x, z)| over atom pairs, skipping singular power-family pairs.
double lipschitz_bound_k(const CostSpec& spec, const SpaceGrid& source_grid,
                         const SpaceGrid& z_grid);

}  // namespace hedmatch
