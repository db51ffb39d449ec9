#include "hedmatch/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "hedmatch/dual_solver.hpp"
#include "hedmatch/error.hpp"
#include "hedmatch/io.hpp"

namespace hedmatch {
namespace {

double weighted_sum(const std::vector<double>& weights, const std::vector<double>& values) {
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) total += weights[i] * values[i];
  return total;
}

bool is_quadratic(const CostSpec& c) { return c.family == CostFamily::kScaledQuadratic; }

void require_quadratic_pair(const Problem& prob) {
  if (!is_quadratic(prob.instance().u_cost) || !is_quadratic(prob.instance().v_cost)) {
    throw Error(ErrorKind::kPrecondition, "u and v must both be scaled_quadratic");
  }
}

RegularGrid require_regular_z(const Problem& prob) {
  auto rg = detect_regular_grid(prob.z_grid());
  if (!rg) throw Error(ErrorKind::kPrecondition, "z grid is not a regular tensor-product grid");
  return *rg;
}

bool uniform_weights(const DiscreteMeasure& m) {
  if (m.size() == 0) return false;
  const double w0 = m.weights.front();
  return std::all_of(m.weights.begin(), m.weights.end(), [w0](double w) {
    return std::abs(w - w0) <= 1e-9 * std::max(std::abs(w0), 1e-300);
  });
}

double determinant(std::vector<std::vector<double>> a) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[pivot][c])) pivot = r;
    }
    if (a[pivot][c] == 0.0) return 0.0;
    if (pivot != c) {
      std::swap(a[pivot], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

// s * alpha for a scaled-quadratic cost: D_z c(x, z) = s * alpha * (z - x).
double curvature(const CostSpec& c) { return c.sign * c.alpha; }

bool interior(const std::vector<std::size_t>& multi, const RegularGrid& rg) {
  for (std::size_t a = 0; a < multi.size(); ++a) {
    if (multi[a] == 0 || multi[a] + 1 >= rg.count[a]) return false;
  }
  return true;
}

double cross(const Point& o, const Point& a, const Point& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

}  // namespace

MatchingResult evaluate_maps(const Problem& prob, std::vector<Index> s_map,
                             std::vector<Index> t_map) {
  MatchingResult r;
  r.lambda = pushforward(s_map, prob.mu(), prob.nz());
  r.t_image = pushforward(t_map, prob.nu(), prob.nz());
  double gain = 0.0;
  for (Index x = 0; x < prob.nx(); ++x) gain += prob.mu()[x] * prob.u()(x, s_map[x]);
  double loss = 0.0;
  for (Index y = 0; y < prob.ny(); ++y) loss += prob.nu()[y] * prob.v()(y, t_map[y]);
  r.primal_value = gain - loss;
  r.marginal_tv = tv_distance(r.lambda, r.t_image);
  r.s_map = std::move(s_map);
  r.t_map = std::move(t_map);
  return r;
}

MatchingResult extract_matching(const PriceVector& p, const Problem& prob) {
  const ConjugateResult sub = subconjugate(p, prob);
  const ConjugateResult sup = superconjugate(p, prob);
  MatchingResult r = evaluate_maps(prob, sub.selected, sup.selected);
  const double dual = weighted_sum(prob.mu().weights, sub.values) -
                      weighted_sum(prob.nu().weights, sup.values);
  r.dual_value = dual;
  r.gap = dual - r.primal_value;
  return r;
}

double SelectionMargins::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : x_margin) m = std::min(m, v);
  for (double v : y_margin) m = std::min(m, v);
  return m;
}

bool SelectionMargins::consistent() const {
  for (std::size_t i = 0; i < x_margin.size(); ++i) {
    if (x_margin[i] < -kTieTol || (x_unique[i] && !(x_margin[i] > 0.0))) return false;
  }
  for (std::size_t i = 0; i < y_margin.size(); ++i) {
    if (y_margin[i] < -kTieTol || (y_unique[i] && !(y_margin[i] > 0.0))) return false;
  }
  return true;
}

SelectionMargins selection_margins(const PriceVector& p, const Problem& prob,
                                   const MatchingResult& result) {
  const ConjugateResult sub = subconjugate(p, prob);
  const ConjugateResult sup = superconjugate(p, prob);
  const double inf = std::numeric_limits<double>::infinity();
  SelectionMargins m;
  for (Index x = 0; x < prob.nx(); ++x) {
    const Index s = result.s_map[x];
    double other = -inf;
    for (Index z = 0; z < prob.nz(); ++z) {
      if (z != s) other = std::max(other, prob.u()(x, z) - p[z]);
    }
    m.x_margin.push_back((prob.u()(x, s) - p[s]) - other);
    m.x_unique.push_back(sub.optimizer_sets[x].size() == 1);
  }
  for (Index y = 0; y < prob.ny(); ++y) {
    const Index t = result.t_map[y];
    double other = inf;
    for (Index z = 0; z < prob.nz(); ++z) {
      if (z != t) other = std::min(other, prob.v()(y, z) - p[z]);
    }
    m.y_margin.push_back(other - (prob.v()(y, t) - p[t]));
    m.y_unique.push_back(sup.optimizer_sets[y].size() == 1);
  }
  return m;
}

SupportEquality support_equality_check(const PriceVector& p, const Problem& prob,
                                       const MatchingResult& result) {
  const PriceVector sharp2 = biconjugate_u(p, prob);
  const PriceVector flat2 = biconjugate_v(p, prob);
  SupportEquality out;
  for (Index z = 0; z < prob.nz(); ++z) {
    if (!(result.lambda[z] > 0.0)) continue;
    out.max_dev_sharp = std::max(out.max_dev_sharp, std::abs(p[z] - sharp2[z]));
    out.max_dev_flat = std::max(out.max_dev_flat, std::abs(p[z] - flat2[z]));
  }
  return out;
}

LinearCaseResult linear_case_solve(const Problem& prob, int max_iters) {
  const Instance& inst = prob.instance();
  if (inst.u_cost.family != CostFamily::kBilinear || inst.v_cost.family != CostFamily::kBilinear) {
    throw Error(ErrorKind::kPrecondition, "linear case needs bilinear u and v");
  }
  const std::size_t d = inst.z_grid.dim;
  if (inst.x_grid.dim != d || inst.y_grid.dim != d) {
    throw Error(ErrorKind::kDimensionMismatch, "linear case needs equal dimensions");
  }

  auto price_of = [&](const Point& pi) {
    PriceVector p = PriceVector::zeros(prob.nz());
    for (Index z = 0; z < prob.nz(); ++z) {
      for (std::size_t c = 0; c < d; ++c) p[z] += pi[c] * inst.z_grid[z][c];
    }
    return p;
  };

  constexpr int kRestartPeriod = 500;
  Point pi(d, 0.0);
  Point best = pi;
  double best_objective = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  int k = 0;
  for (int iter = 0; iter < max_iters; ++iter) {
    const PriceVector p = price_of(pi);
    const double objective = dual_objective(p, prob);
    if (objective < best_objective) {
      best_objective = objective;
      best = pi;
    }
    const std::vector<double> g = dual_subgradient(p, prob);
    Point g_pi(d, 0.0);
    double g_l1 = 0.0;
    for (Index z = 0; z < prob.nz(); ++z) {
      g_l1 += std::abs(g[z]);
      for (std::size_t c = 0; c < d; ++c) g_pi[c] += g[z] * inst.z_grid[z][c];
    }
    if (g_l1 == 0.0) {
      best = pi;
      best_objective = objective;
      break;
    }
    ++k;
    const double step = scale / std::sqrt(static_cast<double>(k));
    for (std::size_t c = 0; c < d; ++c) pi[c] -= step * g_pi[c];
    if (k == kRestartPeriod) {
      pi = best;
      scale *= 0.5;
      k = 0;
    }
  }

  LinearCaseResult out;
  out.pi = best;
  out.matching = extract_matching(price_of(best), prob);
  out.objective = best_objective;
  return out;
}

std::pair<std::vector<Index>, std::vector<Index>> linear_case_maps(const Point& pi,
                                                                    const Problem& prob) {
  const SpaceGrid& zg = prob.z_grid();
  auto pick = [&](const Point& a, bool maximize) {
    std::vector<double> vals(zg.size());
    for (Index z = 0; z < zg.size(); ++z) {
      double dot = 0.0;
      for (std::size_t c = 0; c < pi.size(); ++c) dot += (a[c] - pi[c]) * zg[z][c];
      vals[z] = dot;
    }
    const double ext = maximize ? *std::max_element(vals.begin(), vals.end())
                                : *std::min_element(vals.begin(), vals.end());
    for (Index z = 0; z < zg.size(); ++z) {
      if (std::abs(vals[z] - ext) <= kTieTol) return z;
    }
    return Index{0};
  };
  std::vector<Index> s(prob.nx());
  std::vector<Index> t(prob.ny());
  for (Index x = 0; x < prob.nx(); ++x) s[x] = pick(prob.x_grid()[x], true);
  for (Index y = 0; y < prob.ny(); ++y) t[y] = pick(prob.y_grid()[y], false);
  return {s, t};
}

bool is_extreme_point(const SpaceGrid& grid, Index k) {
  if (k >= grid.size()) throw Error(ErrorKind::kPrecondition, "atom index out of range");
  if (grid.size() == 1) return true;
  if (grid.dim == 1) {
    double lo = grid[0][0];
    double hi = grid[0][0];
    for (const auto& p : grid.points) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return grid[k][0] == lo || grid[k][0] == hi;
  }
  if (grid.dim != 2) {
    throw Error(ErrorKind::kUnsupported, "extreme-point test implemented for dimensions 1 and 2");
  }
  // Andrew's monotone chain; collinear boundary points are not vertices.
  std::vector<Index> order(grid.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return grid[a] < grid[b]; });
  std::vector<Index> hull(2 * order.size());
  std::size_t h = 0;
  for (Index i : order) {
    while (h >= 2 && cross(grid[hull[h - 2]], grid[hull[h - 1]], grid[i]) <= 0.0) --h;
    hull[h++] = i;
  }
  for (std::size_t i = order.size() - 1, lower = h + 1; i-- > 0;) {
    const Index idx = order[i];
    while (h >= lower && cross(grid[hull[h - 2]], grid[hull[h - 1]], grid[idx]) <= 0.0) --h;
    hull[h++] = idx;
  }
  hull.resize(h > 1 ? h - 1 : h);
  return std::find(hull.begin(), hull.end(), k) != hull.end();
}

QuadraticMaps quadratic_maps(const PriceVector& p, const Problem& prob, Index z) {
  require_quadratic_pair(prob);
  const RegularGrid rg = require_regular_z(prob);
  if (p.size() != prob.nz()) throw Error(ErrorKind::kLengthMismatch, "price size mismatch");
  const auto multi = rg.multi_indices();
  if (!interior(multi[z], rg)) {
    throw Error(ErrorKind::kPrecondition, "z atom " + std::to_string(z) + " is on the boundary");
  }
  const Point& zp = prob.z_grid()[z];
  const double ku = curvature(prob.instance().u_cost);
  const double kv = curvature(prob.instance().v_cost);
  QuadraticMaps out{zp, zp};
  for (std::size_t a = 0; a < rg.dim(); ++a) {
    auto up = multi[z];
    auto down = multi[z];
    ++up[a];
    --down[a];
    const double dp = (p[rg.atom(up)] - p[rg.atom(down)]) / (2.0 * rg.spacing[a]);
    out.sigma[a] = zp[a] - dp / ku;
    out.tau[a] = zp[a] - dp / kv;
  }
  return out;
}

ResidualReport monge_ampere_residual(const PriceVector& p, const Problem& prob) {
  require_quadratic_pair(prob);
  const RegularGrid rg = require_regular_z(prob);
  for (auto c : rg.count) {
    if (c < 3) throw Error(ErrorKind::kPrecondition, "grid too small: need >= 3 atoms per axis");
  }
  if (!uniform_weights(prob.mu()) || !uniform_weights(prob.nu())) {
    throw Error(ErrorKind::kPrecondition, "residual needs uniform weights on X and Y");
  }
  if (p.size() != prob.nz()) throw Error(ErrorKind::kLengthMismatch, "price size mismatch");

  const double ku = curvature(prob.instance().u_cost);
  const double kv = curvature(prob.instance().v_cost);
  const std::size_t d = rg.dim();
  const auto multi = rg.multi_indices();

  ResidualReport report;
  for (Index z = 0; z < prob.nz(); ++z) {
    if (!interior(multi[z], rg)) continue;
    std::vector<std::vector<double>> hess(d, std::vector<double>(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
      auto up = multi[z];
      auto down = multi[z];
      ++up[a];
      --down[a];
      const double h = rg.spacing[a];
      hess[a][a] = (p[rg.atom(up)] - 2.0 * p[z] + p[rg.atom(down)]) / (h * h);
      for (std::size_t b = a + 1; b < d; ++b) {
        auto pp = multi[z], pm = multi[z], mp = multi[z], mm = multi[z];
        ++pp[a], ++pp[b];
        ++pm[a], --pm[b];
        --mp[a], ++mp[b];
        --mm[a], --mm[b];
        const double v = (p[rg.atom(pp)] - p[rg.atom(pm)] - p[rg.atom(mp)] + p[rg.atom(mm)]) /
                         (4.0 * h * rg.spacing[b]);
        hess[a][b] = v;
        hess[b][a] = v;
      }
    }
    auto jac = [&](double k) {
      std::vector<std::vector<double>> m(d, std::vector<double>(d, 0.0));
      for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) m[a][b] = (a == b ? 1.0 : 0.0) - hess[a][b] / k;
      }
      return determinant(std::move(m));
    };
    const double res = std::abs(jac(kv) - jac(ku));
    report.interior.push_back(z);
    report.residual.push_back(res);
    report.max_residual = std::max(report.max_residual, res);
  }
  return report;
}

MatchingResult monotone_1d_oracle(const Problem& prob) {
  const Instance& inst = prob.instance();
  if (inst.x_grid.dim != 1 || inst.y_grid.dim != 1 || inst.z_grid.dim != 1) {
    throw Error(ErrorKind::kPrecondition, "monotone oracle needs 1D grids");
  }
  if (prob.nx() != prob.ny()) {
    throw Error(ErrorKind::kPrecondition, "monotone oracle needs |X| = |Y|");
  }
  if (!uniform_weights(prob.mu()) || !uniform_weights(prob.nu()) ||
      std::abs(prob.mu()[0] - prob.nu()[0]) > 1e-9 * prob.mu()[0]) {
    throw Error(ErrorKind::kPrecondition, "monotone oracle needs equal atom weights");
  }
  const CostSpec& u = inst.u_cost;
  const CostSpec& v = inst.v_cost;
  if (!is_quadratic(u) || u.sign != -1 || !is_quadratic(v) || v.sign != 1 || v.alpha != 1.0) {
    throw Error(ErrorKind::kPrecondition,
                "monotone oracle needs u = -(a/2)|x-z|^2 and v = (1/2)|y-z|^2");
  }
  const double alpha = u.alpha;

  auto sorted = [](const SpaceGrid& g) {
    std::vector<Index> idx(g.size());
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) { return g[a][0] < g[b][0]; });
    return idx;
  };
  const auto xs = sorted(inst.x_grid);
  const auto ys = sorted(inst.y_grid);

  std::vector<Index> s(prob.nx());
  std::vector<Index> t(prob.ny());
  for (std::size_t r = 0; r < xs.size(); ++r) {
    const double target = (alpha * inst.x_grid[xs[r]][0] + inst.y_grid[ys[r]][0]) / (alpha + 1.0);
    Index nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (Index z = 0; z < prob.nz(); ++z) {
      const double dist = std::abs(inst.z_grid[z][0] - target);
      if (dist < best) {
        best = dist;
        nearest = z;
      }
    }
    s[xs[r]] = nearest;
    t[ys[r]] = nearest;
  }
  return evaluate_maps(prob, std::move(s), std::move(t));
}

void write_map_csv(std::ostream& os, const SpaceGrid& source, const DiscreteMeasure& weights,
                   const std::vector<Index>& map, const SpaceGrid& z_grid,
                   const char* source_label) {
  const std::string label = source_label;
  os << label << "_index";
  for (std::size_t c = 0; c < source.dim; ++c) os << ',' << label << '_' << c;
  os << ",z_index";
  for (std::size_t c = 0; c < z_grid.dim; ++c) os << ",z_" << c;
  os << ",weight\n";
  for (Index i = 0; i < map.size(); ++i) {
    os << i;
    for (double c : source[i]) os << ',' << format_double(c);
    os << ',' << map[i];
    for (double c : z_grid[map[i]]) os << ',' << format_double(c);
    os << ',' << format_double(weights[i]) << '\n';
  }
}

void write_residual_csv(std::ostream& os, const ResidualReport& report) {
  os << "z_index,residual\n";
  for (std::size_t i = 0; i < report.interior.size(); ++i) {
    os << report.interior[i] << ',' << format_double(report.residual[i]) << '\n';
  }
}

}  // namespace hedmatch
