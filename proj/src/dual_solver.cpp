#include "hedmatch/dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "hedmatch/error.hpp"
#include "hedmatch/io.hpp"

namespace hedmatch {
namespace {

struct Evaluation {
  double objective = 0.0;
  std::vector<double> subgradient;
  double marginal_tv = 0.0;
};

double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) total += weights[i] * values[i];
  return total;
}

Evaluation evaluate(const PriceVector& p, const Problem& prob, double epsilon) {
  const ConjugateResult sub = subconjugate(p, prob, epsilon);
  const ConjugateResult sup = superconjugate(p, prob, epsilon);
  const auto& mu = prob.mu().weights;
  const auto& nu = prob.nu().weights;

  Evaluation e;
  e.objective = weighted_sum(mu, sub.values) - weighted_sum(nu, sup.values);
  e.subgradient.assign(prob.nz(), 0.0);
  if (epsilon == 0.0) {
    for (Index y = 0; y < prob.ny(); ++y) e.subgradient[sup.selected[y]] += nu[y];
    for (Index x = 0; x < prob.nx(); ++x) e.subgradient[sub.selected[x]] -= mu[x];
  } else {
    for (Index y = 0; y < prob.ny(); ++y) {
      for (Index z = 0; z < prob.nz(); ++z) e.subgradient[z] += nu[y] * sup.soft_weights(y, z);
    }
    for (Index x = 0; x < prob.nx(); ++x) {
      for (Index z = 0; z < prob.nz(); ++z) e.subgradient[z] -= mu[x] * sub.soft_weights(x, z);
    }
  }
  double l1 = 0.0;
  for (double g : e.subgradient) l1 += std::abs(g);
  e.marginal_tv = 0.5 * l1;
  return e;
}

void require_finite(double objective, int iter) {
  if (!std::isfinite(objective)) {
    throw Error(ErrorKind::kNonFinite,
                "dual objective is not finite at iteration " + std::to_string(iter) +
                    " (check the cost tables for inf/nan entries)");
  }
}

}  // namespace

const char* to_string(SolveStatus status) {
  return status == SolveStatus::kConverged ? "converged" : "max_iters_reached";
}

void SolverConfig::validate() const {
  if (max_iters < 1) throw Error(ErrorKind::kPrecondition, "max_iters must be >= 1");
  if (!(step0 > 0.0)) throw Error(ErrorKind::kPrecondition, "step0 must be > 0");
  if (!(tol_marginal >= 0.0)) throw Error(ErrorKind::kPrecondition, "tol_marginal must be >= 0");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorKind::kPrecondition, "epsilon must be finite and >= 0");
  }
  if (restart_period < 1) throw Error(ErrorKind::kPrecondition, "restart_period must be >= 1");
  if (!(restart_decay > 0.0 && restart_decay <= 1.0)) {
    throw Error(ErrorKind::kPrecondition, "restart_decay must lie in (0, 1]");
  }
}

double dual_objective(const PriceVector& p, const Problem& prob, double epsilon) {
  const ConjugateResult sub = subconjugate(p, prob, epsilon);
  const ConjugateResult sup = superconjugate(p, prob, epsilon);
  return weighted_sum(prob.mu().weights, sub.values) - weighted_sum(prob.nu().weights, sup.values);
}

std::vector<double> dual_subgradient(const PriceVector& p, const Problem& prob,
                                     double epsilon) {
  return evaluate(p, prob, epsilon).subgradient;
}

PriceVector normalize(const PriceVector& p) {
  if (p.size() == 0) return p;
  const double lo = *std::min_element(p.values.begin(), p.values.end());
  PriceVector out = p;
  for (double& v : out.values) v -= lo;
  return out;
}

SolveResult solve_dual(const Problem& prob, const SolverConfig& cfg) {
  cfg.validate();
  const std::size_t nz = prob.nz();

  SolveResult result;
  PriceVector p = PriceVector::zeros(nz);
  PriceVector best = p;
  double best_objective = std::numeric_limits<double>::infinity();

  PriceVector avg_sum = PriceVector::zeros(nz);
  double avg_weight = 0.0;
  double scale = cfg.step0;
  int k = 0;

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const Evaluation e = evaluate(p, prob, cfg.epsilon);
    require_finite(e.objective, iter);
    if (e.objective < best_objective) {
      best_objective = e.objective;
      best = p;
    }
    if (avg_weight > 0.0) {
      PriceVector avg = avg_sum;
      for (double& v : avg.values) v /= avg_weight;
      const double avg_objective = dual_objective(avg, prob, cfg.epsilon);
      if (avg_objective < best_objective) {
        best_objective = avg_objective;
        best = avg;
      }
    }
    result.iterations = iter + 1;

    if (e.marginal_tv <= cfg.tol_marginal) {
      result.trace.records.push_back({iter, e.objective, e.marginal_tv, 0.0, best_objective});
      result.trace.status = SolveStatus::kConverged;
      result.price = std::move(p);
      result.objective = e.objective;
      result.marginal_tv = e.marginal_tv;
      return result;
    }

    ++k;
    const double step = scale / std::sqrt(static_cast<double>(k));
    result.trace.records.push_back({iter, e.objective, e.marginal_tv, step, best_objective});

    for (Index z = 0; z < nz; ++z) p[z] -= step * e.subgradient[z];
    p = normalize(p);
    for (Index z = 0; z < nz; ++z) avg_sum[z] += step * p[z];
    avg_weight += step;

    if (k == cfg.restart_period) {
      p = best;
      scale *= cfg.restart_decay;
      k = 0;
      avg_sum = PriceVector::zeros(nz);
      avg_weight = 0.0;
    }
  }

  result.trace.status = SolveStatus::kMaxItersReached;
  result.price = normalize(best);
  const Evaluation final_eval = evaluate(result.price, prob, cfg.epsilon);
  result.objective = final_eval.objective;
  result.marginal_tv = final_eval.marginal_tv;
  return result;
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
  os << "iter,objective,marginal_tv,step\n";
  for (const auto& r : trace.records) {
    os << r.iter << ',' << format_double(r.objective) << ',' << format_double(r.marginal_tv)
       << ',' << format_double(r.step) << '\n';
  }
}

}  // namespace hedmatch
