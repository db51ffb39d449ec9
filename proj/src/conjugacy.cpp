#include "hedmatch/conjugacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hedmatch/error.hpp"
#include "hedmatch/parallel.hpp"

namespace hedmatch {
namespace {

enum class Extremum { kMax, kMin };

// For every target t: extremum over candidates c of value(t, c). Optimizer sets
// are gathered in ascending candidate order, so `selected` is the lowest index.
template <typename ValueFn>
ConjugateResult reduce(std::size_t n_targets, std::size_t n_candidates, Extremum ext,
                       double epsilon, ValueFn value) {
  if (epsilon < 0.0 || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::kPrecondition, "smoothing parameter must be finite and >= 0");
  }
  ConjugateResult r;
  r.values.resize(n_targets);
  r.optimizer_sets.resize(n_targets);
  r.selected.resize(n_targets);
  if (epsilon > 0.0) r.soft_weights = Matrix(n_targets, n_candidates);

  parallel_for(n_targets, n_candidates, [&](std::size_t t) {
    std::vector<double> vals(n_candidates);
    double best = ext == Extremum::kMax ? -std::numeric_limits<double>::infinity()
                                        : std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n_candidates; ++c) {
      vals[c] = value(t, c);
      best = ext == Extremum::kMax ? std::max(best, vals[c]) : std::min(best, vals[c]);
    }
    auto& set = r.optimizer_sets[t];
    for (std::size_t c = 0; c < n_candidates; ++c) {
      // Equality first so infinite extrema still form a set.
      if (vals[c] == best || std::abs(vals[c] - best) <= kTieTol) set.push_back(c);
    }
    // All-NaN rows have no optimizer; callers detect the NaN value.
    r.selected[t] = set.empty() ? 0 : set.front();
    if (epsilon == 0.0) {
      r.values[t] = best;
      return;
    }
    const double dir = ext == Extremum::kMax ? 1.0 : -1.0;
    double total = 0.0;
    for (std::size_t c = 0; c < n_candidates; ++c) {
      const double w = std::exp(dir * (vals[c] - best) / epsilon);
      r.soft_weights(t, c) = w;
      total += w;
    }
    for (std::size_t c = 0; c < n_candidates; ++c) r.soft_weights(t, c) /= total;
    r.values[t] = best + dir * epsilon * std::log(total);
  });
  return r;
}

void require_price_size(const PriceVector& p, const Problem& prob) {
  if (p.size() != prob.nz()) {
    throw Error(ErrorKind::kLengthMismatch, "price has " + std::to_string(p.size()) +
                                                " entries for " + std::to_string(prob.nz()) +
                                                " z atoms");
  }
}

}  // namespace

bool PriceVector::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

ConjugateResult subconjugate(const PriceVector& p, const Problem& prob, double epsilon) {
  require_price_size(p, prob);
  const Matrix& u = prob.u();
  return reduce(prob.nx(), prob.nz(), Extremum::kMax, epsilon,
                [&](std::size_t x, std::size_t z) { return u(x, z) - p[z]; });
}

ConjugateResult superconjugate(const PriceVector& p, const Problem& prob, double epsilon) {
  require_price_size(p, prob);
  const Matrix& v = prob.v();
  return reduce(prob.ny(), prob.nz(), Extremum::kMin, epsilon,
                [&](std::size_t y, std::size_t z) { return v(y, z) - p[z]; });
}

ConjugateResult subconjugate_to_z(std::span<const double> f, const Problem& prob) {
  if (f.size() != prob.nx()) {
    throw Error(ErrorKind::kLengthMismatch, "function on X has the wrong length");
  }
  const Matrix& u = prob.u();
  return reduce(prob.nz(), prob.nx(), Extremum::kMax, 0.0,
                [&](std::size_t z, std::size_t x) { return u(x, z) - f[x]; });
}

ConjugateResult superconjugate_to_z(std::span<const double> g, const Problem& prob) {
  if (g.size() != prob.ny()) {
    throw Error(ErrorKind::kLengthMismatch, "function on Y has the wrong length");
  }
  const Matrix& v = prob.v();
  return reduce(prob.nz(), prob.ny(), Extremum::kMin, 0.0,
                [&](std::size_t z, std::size_t y) { return v(y, z) - g[y]; });
}

PriceVector biconjugate_u(const PriceVector& p, const Problem& prob) {
  return PriceVector(subconjugate_to_z(subconjugate(p, prob).values, prob).values);
}

PriceVector biconjugate_v(const PriceVector& p, const Problem& prob) {
  return PriceVector(superconjugate_to_z(superconjugate(p, prob).values, prob).values);
}

Matrix fenchel_gap(const PriceVector& p, const ConjugateResult& conj, const Problem& prob,
                   Side side) {
  require_price_size(p, prob);
  const Matrix& c = side == Side::kU ? prob.u() : prob.v();
  if (conj.values.size() != c.rows()) {
    throw Error(ErrorKind::kLengthMismatch, "conjugate does not match the source grid");
  }
  Matrix gap(c.rows(), c.cols());
  for (std::size_t i = 0; i < c.rows(); ++i) {
    for (std::size_t z = 0; z < c.cols(); ++z) {
      gap(i, z) = side == Side::kU ? conj.values[i] + p[z] - c(i, z)
                                   : c(i, z) - conj.values[i] - p[z];
    }
  }
  return gap;
}

std::pair<std::vector<double>, std::vector<double>> triple_conjugate(const PriceVector& p,
                                                                     const Problem& prob) {
  auto sharp = subconjugate(p, prob).values;
  PriceVector bi = biconjugate_u(p, prob);
  auto triple = subconjugate(bi, prob).values;
  return {std::move(sharp), std::move(triple)};
}

Index attained_equality_witness(const PriceVector& p, const Problem& prob, Index x) {
  if (x >= prob.nx()) {
    throw Error(ErrorKind::kPrecondition, "x index out of range");
  }
  const ConjugateResult sharp = subconjugate(p, prob);
  const PriceVector bi = biconjugate_u(p, prob);
  Index best = sharp.optimizer_sets[x].front();
  double best_dev = std::numeric_limits<double>::infinity();
  for (Index z : sharp.optimizer_sets[x]) {
    const double dev = std::abs(p[z] - bi[z]);
    if (dev <= 1e-10) return z;
    if (dev < best_dev) {
      best_dev = dev;
      best = z;
    }
  }
  return best;
}

}  // namespace hedmatch
