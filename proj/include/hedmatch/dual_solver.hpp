#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hedmatch/conjugacy.hpp"
#include "hedmatch/instance.hpp"

namespace hedmatch {

struct SolverConfig {
  int max_iters = 5000;
  double step0 = 1.0;
  double tol_marginal = 1e-6;
  double epsilon = 0.0;
  std::uint64_t seed = 0;
  // Steps follow scale / sqrt(k) with k counted from the last restart. Every
  // `restart_period` iterations the iterate returns to the best point seen
  // and the scale is multiplied by `restart_decay`.
  int restart_period = 500;
  double restart_decay = 0.5;

  void validate() const;
};

enum class SolveStatus { kConverged, kMaxItersReached };

const char* to_string(SolveStatus status);

struct TraceRecord {
  int iter = 0;
  double objective = 0.0;
  double marginal_tv = 0.0;
  double step = 0.0;
  double best_objective = 0.0;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
  SolveStatus status = SolveStatus::kMaxItersReached;
};

struct SolveResult {
  PriceVector price;
  SolveTrace trace;
  double objective = 0.0;
  double marginal_tv = 0.0;
  int iterations = 0;

  SolveStatus status() const { return trace.status; }
  bool converged() const { return trace.status == SolveStatus::kConverged; }
};

// J(p) = sum_x p#(x) mu(x) - sum_y pb(y) nu(y).
double dual_objective(const PriceVector& p, const Problem& prob, double epsilon = 0.0);

// g(z) = nu(t^-1(z)) - mu(s^-1(z)) for the selected maps s, t (Gibbs-weighted
// pushforwards when epsilon > 0). g is a subgradient of J (the gradient of the
// smoothed J when epsilon > 0), and half its l1 norm is the marginal TV.
std::vector<double> dual_subgradient(const PriceVector& p, const Problem& prob,
                                     double epsilon = 0.0);

// Shifts p so that min p = 0.
PriceVector normalize(const PriceVector& p);

// Projected subgradient descent on J from p = 0. Converged when the marginal
// TV at the current iterate is at most cfg.tol_marginal; that iterate is
// returned. Otherwise the best iterate (current or running weighted average)
// is returned. Throws kNonFinite if the objective is not finite.
SolveResult solve_dual(const Problem& prob, const SolverConfig& cfg = {});

// CSV with columns iter,objective,marginal_tv,step.
void write_trace_csv(std::ostream& os, const SolveTrace& trace);

}  // namespace hedmatch
