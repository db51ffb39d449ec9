#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "hedmatch/conjugacy.hpp"
#include "hedmatch/instance.hpp"
#include "hedmatch/spaces.hpp"

namespace hedmatch {

struct MatchingResult {
  std::vector<Index> s_map;  // x atom -> z atom
  std::vector<Index> t_map;  // y atom -> z atom
  DiscreteMeasure lambda;    // s(mu)
  DiscreteMeasure t_image;   // t(nu)
  double primal_value = 0.0;
  std::optional<double> dual_value;
  std::optional<double> gap;
  double marginal_tv = 0.0;
};

// Builds the pushforwards and primal value for given maps.
MatchingResult evaluate_maps(const Problem& prob, std::vector<Index> s_map,
                             std::vector<Index> t_map);

// s = selected optimizers of p#, t = selected optimizers of pb, evaluated
// exactly (no smoothing). dual_value = J(p), gap = dual - primal.
MatchingResult extract_matching(const PriceVector& p, const Problem& prob);

// How strongly each selected atom beats its competitors:
// margin = value at the selection - best value at any other z (sign adjusted so
// that the selection is optimal iff margin >= 0; strict iff margin > 0).
struct SelectionMargins {
  std::vector<double> x_margin;
  std::vector<double> y_margin;
  std::vector<bool> x_unique;
  std::vector<bool> y_unique;

  double min_margin() const;
  // Every margin >= -kTieTol and every singleton optimizer set strict.
  bool consistent() const;
};

SelectionMargins selection_margins(const PriceVector& p, const Problem& prob,
                                   const MatchingResult& result);

struct SupportEquality {
  double max_dev_sharp = 0.0;  // max over Supp(lambda) of |p - p##|
  double max_dev_flat = 0.0;   // max over Supp(lambda) of |p - pbb|
};

SupportEquality support_equality_check(const PriceVector& p, const Problem& prob,
                                       const MatchingResult& result);

struct LinearCaseResult {
  Point pi;
  MatchingResult matching;
  double objective = 0.0;
};

// Both costs bilinear: searches p(z) = <pi, z> by subgradient descent on pi.
LinearCaseResult linear_case_solve(const Problem& prob, int max_iters = 4000);

// s(x) = argmax_z <x - pi, z>, t(y) = argmin_z <y - pi, z>, lowest index on ties,
// from coordinates alone.
std::pair<std::vector<Index>, std::vector<Index>> linear_case_maps(const Point& pi,
                                                                    const Problem& prob);

// True iff atom k is a vertex of conv(grid). Exact for dim 1 and 2; throws
// kUnsupported above that.
bool is_extreme_point(const SpaceGrid& grid, Index k);

struct QuadraticMaps {
  Point sigma;
  Point tau;
};

// sigma(z), tau(z) from the first-order conditions D_z u(sigma, z) = D_z p(z)
// and D_z v(tau, z) = D_z p(z) for scaled-quadratic u and v, with D_z p from
// central differences. Requires a regular z grid and an interior atom.
QuadraticMaps quadratic_maps(const PriceVector& p, const Problem& prob, Index z);

struct ResidualReport {
  std::vector<Index> interior;
  std::vector<double> residual;
  double max_residual = 0.0;
};

// Jacobian balance det D sigma = det D tau at interior atoms, i.e.
// |det(I - H / (s_v a_v)) - det(I - H / (s_u a_u))| with H the central
// difference Hessian of p. For u = -(a/2)|x-z|^2, v = (1/2)|y-z|^2 this is
// |det(I - H) - det(I + H / a)|. Needs >= 3 atoms per axis and uniform
// weights on X and Y.
ResidualReport monge_ampere_residual(const PriceVector& p, const Problem& prob);

// Exact 1D pairing for u = -(a/2)(x-z)^2, v = (1/2)(y-z)^2 with equal atom
// counts and equal weights: sorted x_i pairs with sorted y_i and both go to
// the atom nearest (a x + y) / (a + 1).
MatchingResult monotone_1d_oracle(const Problem& prob);

// CSV: index, coordinates, z_index, z coordinates, weight.
void write_map_csv(std::ostream& os, const SpaceGrid& source, const DiscreteMeasure& weights,
                   const std::vector<Index>& map, const SpaceGrid& z_grid,
                   const char* source_label);
void write_residual_csv(std::ostream& os, const ResidualReport& report);

}  // namespace hedmatch
