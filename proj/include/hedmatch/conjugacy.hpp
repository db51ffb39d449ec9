#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hedmatch/instance.hpp"
#include "hedmatch/matrix.hpp"

namespace hedmatch {

// Optimizer sets collect every candidate within this of the extremum.
inline constexpr double kTieTol = 1e-12;

// A price p : Z -> R. Finite values only.
struct PriceVector {
  std::vector<double> values;

  PriceVector() = default;
  explicit PriceVector(std::vector<double> v) : values(std::move(v)) {}
  static PriceVector zeros(std::size_t n) { return PriceVector(std::vector<double>(n, 0.0)); }

  std::size_t size() const { return values.size(); }
  double operator[](Index i) const { return values[i]; }
  double& operator[](Index i) { return values[i]; }
  bool all_finite() const;
};

// Values of a conjugate over a target grid plus the discrete subdifferential
// at every target atom. `selected` is the lowest index of each optimizer set.
// With smoothing, `values` are the soft extrema and `soft_weights(i, j)` the
// Gibbs weights over candidates; optimizer sets still refer to the exact
// extremum.
struct ConjugateResult {
  std::vector<double> values;
  std::vector<std::vector<Index>> optimizer_sets;
  std::vector<Index> selected;
  Matrix soft_weights;
};

// p#(x) = max_z u(x, z) - p(z).
// epsilon > 0 replaces the max with epsilon * log sum_z exp((u - p) / epsilon).
ConjugateResult subconjugate(const PriceVector& p, const Problem& prob, double epsilon = 0.0);

// pb(y) = min_z v(y, z) - p(z).
// epsilon > 0 replaces the min with -epsilon * log sum_z exp(-(v - p) / epsilon).
ConjugateResult superconjugate(const PriceVector& p, const Problem& prob, double epsilon = 0.0);

// f#(z) = max_x u(x, z) - f(x) for a function f on X.
ConjugateResult subconjugate_to_z(std::span<const double> f, const Problem& prob);

// gb(z) = min_y v(y, z) - g(y) for a function g on Y.
ConjugateResult superconjugate_to_z(std::span<const double> g, const Problem& prob);

// p## over Z; never exceeds p.
PriceVector biconjugate_u(const PriceVector& p, const Problem& prob);

// pbb over Z; never below p.
PriceVector biconjugate_v(const PriceVector& p, const Problem& prob);

enum class Side { kU, kV };

// Fenchel slack per (source atom, z atom):
//   u side: p#(x) + p(z) - u(x, z)
//   v side: v(y, z) - pb(y) - p(z)
// Non-negative everywhere; zero on optimizer pairs.
Matrix fenchel_gap(const PriceVector& p, const ConjugateResult& conj, const Problem& prob,
                   Side side);

// (p#, p###), both over X.
std::pair<std::vector<double>, std::vector<double>> triple_conjugate(const PriceVector& p,
                                                                     const Problem& prob);

// A z in the optimizer set of p# at x with p(z) = p##(z) (within 1e-10).
// Returns the lowest such index; falls back to the set member that minimizes
// |p - p##| if rounding hides an exact witness.
Index attained_equality_witness(const PriceVector& p, const Problem& prob, Index x);

}  // namespace hedmatch
