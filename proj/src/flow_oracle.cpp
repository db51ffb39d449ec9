#include "hedmatch/flow_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <queue>
#include <string>

#include "hedmatch/error.hpp"
#include "hedmatch/io.hpp"

namespace hedmatch {
namespace {

constexpr double kIntegralTol = 1e-9;
constexpr std::int64_t kMaxSuggestedScale = 1 << 16;

bool integral_after_scaling(const std::vector<double>& weights, std::int64_t scale) {
  return std::all_of(weights.begin(), weights.end(), [scale](double w) {
    const double s = w * static_cast<double>(scale);
    return std::abs(s - std::round(s)) <= kIntegralTol;
  });
}

std::vector<std::int64_t> scaled(const std::vector<double>& weights, std::int64_t scale) {
  std::vector<std::int64_t> out;
  out.reserve(weights.size());
  for (double w : weights) out.push_back(std::llround(w * static_cast<double>(scale)));
  return out;
}

struct Arc {
  std::size_t head;
  std::size_t rev;
  std::int64_t cap;
  double cost;
};

// Residual graph over S, X, Z, Y, T. Node order: x atoms, z atoms, y atoms,
// then S and T.
class Residual {
 public:
  explicit Residual(std::size_t n) : adj_(n) {}

  std::size_t add(std::size_t tail, std::size_t head, std::int64_t cap, double cost) {
    adj_[tail].push_back({head, adj_[head].size(), cap, cost});
    adj_[head].push_back({tail, adj_[tail].size() - 1, 0, -cost});
    return adj_[tail].size() - 1;
  }

  std::size_t size() const { return adj_.size(); }
  std::vector<Arc>& out(std::size_t v) { return adj_[v]; }
  const std::vector<Arc>& out(std::size_t v) const { return adj_[v]; }
  Arc& reverse(const Arc& a) { return adj_[a.head][a.rev]; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

FlowNetwork build_network(const Problem& prob, std::int64_t mass_scale) {
  if (mass_scale <= 0) throw Error(ErrorKind::kPrecondition, "mass scale must be positive");
  const auto& mu = prob.mu().weights;
  const auto& nu = prob.nu().weights;
  if (!integral_after_scaling(mu, mass_scale) || !integral_after_scaling(nu, mass_scale)) {
    std::string hint = "no scale up to " + std::to_string(kMaxSuggestedScale) + " works";
    for (std::int64_t k = 1; k <= kMaxSuggestedScale; ++k) {
      if (integral_after_scaling(mu, k) && integral_after_scaling(nu, k)) {
        hint = "try mass scale " + std::to_string(k);
        break;
      }
    }
    throw Error(ErrorKind::kRationalMass, "weights times mass scale " +
                                              std::to_string(mass_scale) +
                                              " are not integers; " + hint);
  }
  FlowNetwork net;
  net.mass_scale = mass_scale;
  net.supply = scaled(mu, mass_scale);
  net.demand = scaled(nu, mass_scale);
  net.cost_xz = Matrix(prob.nx(), prob.nz());
  net.cost_zy = Matrix(prob.nz(), prob.ny());
  for (Index x = 0; x < prob.nx(); ++x) {
    for (Index z = 0; z < prob.nz(); ++z) net.cost_xz(x, z) = -prob.u()(x, z);
  }
  for (Index z = 0; z < prob.nz(); ++z) {
    for (Index y = 0; y < prob.ny(); ++y) net.cost_zy(z, y) = prob.v()(y, z);
  }
  return net;
}

FlowSolution solve_flow(const FlowNetwork& net) {
  const std::int64_t total_supply = std::accumulate(net.supply.begin(), net.supply.end(),
                                                    std::int64_t{0});
  const std::int64_t total_demand = std::accumulate(net.demand.begin(), net.demand.end(),
                                                    std::int64_t{0});
  if (total_supply != total_demand) {
    throw Error(ErrorKind::kUnbalanced, "supply " + std::to_string(total_supply) +
                                            " != demand " + std::to_string(total_demand));
  }
  const std::size_t nx = net.nx();
  const std::size_t ny = net.ny();
  const std::size_t nz = net.nz();
  const std::size_t z0 = nx;
  const std::size_t y0 = nx + nz;
  const std::size_t src = nx + nz + ny;
  const std::size_t snk = src + 1;

  Residual g(snk + 1);
  std::vector<std::vector<std::size_t>> xz_arc(nx, std::vector<std::size_t>(nz));
  std::vector<std::vector<std::size_t>> zy_arc(nz, std::vector<std::size_t>(ny));
  for (std::size_t x = 0; x < nx; ++x) g.add(src, x, net.supply[x], 0.0);
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      xz_arc[x][z] = g.add(x, z0 + z, total_supply, net.cost_xz(x, z));
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      zy_arc[z][y] = g.add(z0 + z, y0 + y, total_supply, net.cost_zy(z, y));
    }
  }
  for (std::size_t y = 0; y < ny; ++y) g.add(y0 + y, snk, net.demand[y], 0.0);

  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = g.size();

  // Initial potentials: shortest distances on the DAG S -> X -> Z -> Y -> T.
  std::vector<double> pot(n, 0.0);
  for (std::size_t z = 0; z < nz; ++z) {
    double best = nx == 0 ? 0.0 : inf;
    for (std::size_t x = 0; x < nx; ++x) best = std::min(best, net.cost_xz(x, z));
    pot[z0 + z] = best;
  }
  for (std::size_t y = 0; y < ny; ++y) {
    double best = nz == 0 ? 0.0 : inf;
    for (std::size_t z = 0; z < nz; ++z) best = std::min(best, pot[z0 + z] + net.cost_zy(z, y));
    pot[y0 + y] = best;
  }
  pot[snk] = ny == 0 ? 0.0 : *std::min_element(pot.begin() + y0, pot.begin() + y0 + ny);

  std::int64_t remaining = total_supply;
  std::vector<double> dist(n);
  std::vector<std::size_t> prev_node(n);
  std::vector<std::size_t> prev_arc(n);
  using Item = std::pair<double, std::size_t>;
  while (remaining > 0) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[src] = 0.0;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.push({0.0, src});
    while (!heap.empty()) {
      const auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[v]) continue;
      const auto& arcs = g.out(v);
      for (std::size_t i = 0; i < arcs.size(); ++i) {
        const Arc& a = arcs[i];
        if (a.cap <= 0) continue;
        // Reduced costs are non-negative up to rounding.
        const double rc = std::max(0.0, a.cost + pot[v] - pot[a.head]);
        const double nd = d + rc;
        if (nd < dist[a.head]) {
          dist[a.head] = nd;
          prev_node[a.head] = v;
          prev_arc[a.head] = i;
          heap.push({nd, a.head});
        }
      }
    }
    if (dist[snk] == inf) throw Error(ErrorKind::kUnbalanced, "sink unreachable");
    double reach_max = 0.0;
    for (double d : dist) {
      if (d != inf) reach_max = std::max(reach_max, d);
    }
    for (std::size_t v = 0; v < n; ++v) pot[v] += dist[v] == inf ? reach_max : dist[v];

    std::int64_t push = remaining;
    for (std::size_t v = snk; v != src; v = prev_node[v]) {
      push = std::min(push, g.out(prev_node[v])[prev_arc[v]].cap);
    }
    for (std::size_t v = snk; v != src; v = prev_node[v]) {
      Arc& a = g.out(prev_node[v])[prev_arc[v]];
      a.cap -= push;
      g.reverse(a).cap += push;
    }
    remaining -= push;
  }

  FlowSolution sol;
  sol.mass_scale = net.mass_scale;
  sol.flow_xz.assign(nx, std::vector<std::int64_t>(nz, 0));
  sol.flow_zy.assign(nz, std::vector<std::int64_t>(ny, 0));
  double gain = 0.0;
  for (std::size_t x = 0; x < nx; ++x) {
    int used = 0;
    for (std::size_t z = 0; z < nz; ++z) {
      const Arc& a = g.out(x)[xz_arc[x][z]];
      const std::int64_t f = g.reverse(a).cap;
      sol.flow_xz[x][z] = f;
      if (f > 0) {
        ++used;
        gain -= static_cast<double>(f) * net.cost_xz(x, z);
      }
    }
    sol.splits_mass = sol.splits_mass || used > 1;
  }
  std::vector<int> y_used(ny, 0);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < ny; ++y) {
      const Arc& a = g.out(z0 + z)[zy_arc[z][y]];
      const std::int64_t f = g.reverse(a).cap;
      sol.flow_zy[z][y] = f;
      if (f > 0) {
        ++y_used[y];
        gain -= static_cast<double>(f) * net.cost_zy(z, y);
      }
    }
  }
  for (int c : y_used) sol.splits_mass = sol.splits_mass || c > 1;
  sol.optimal_value = gain / static_cast<double>(net.mass_scale);
  sol.potentials.assign(pot.begin(), pot.begin() + static_cast<std::ptrdiff_t>(src));
  return sol;
}

SlacknessReport complementary_slackness(const FlowNetwork& net, const FlowSolution& sol) {
  const std::size_t nx = net.nx();
  const std::size_t nz = net.nz();
  const auto& pot = sol.potentials;
  SlacknessReport r;
  auto visit = [&](double rc, std::int64_t flow) {
    r.min_reduced_cost = std::min(r.min_reduced_cost, rc);
    if (flow > 0) r.max_used_arc_reduced_cost = std::max(r.max_used_arc_reduced_cost, std::abs(rc));
  };
  for (std::size_t x = 0; x < nx; ++x) {
    for (std::size_t z = 0; z < nz; ++z) {
      visit(net.cost_xz(x, z) + pot[x] - pot[nx + z], sol.flow_xz[x][z]);
    }
  }
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t y = 0; y < net.ny(); ++y) {
      visit(net.cost_zy(z, y) + pot[nx + z] - pot[nx + nz + y], sol.flow_zy[z][y]);
    }
  }
  return r;
}

double compare_with_dual(const FlowSolution& sol, double dual_value) {
  return dual_value - sol.optimal_value;
}

void write_flow_csv(std::ostream& os, const FlowNetwork& net, const FlowSolution& sol) {
  const double scale = static_cast<double>(sol.mass_scale);
  os << "tail,head,flow,cost\n";
  for (std::size_t x = 0; x < net.nx(); ++x) {
    for (std::size_t z = 0; z < net.nz(); ++z) {
      os << 'x' << x << ",z" << z << ',' << format_double(sol.flow_xz[x][z] / scale) << ','
         << format_double(net.cost_xz(x, z)) << '\n';
    }
  }
  for (std::size_t z = 0; z < net.nz(); ++z) {
    for (std::size_t y = 0; y < net.ny(); ++y) {
      os << 'z' << z << ",y" << y << ',' << format_double(sol.flow_zy[z][y] / scale) << ','
         << format_double(net.cost_zy(z, y)) << '\n';
    }
  }
}

}  // namespace hedmatch
