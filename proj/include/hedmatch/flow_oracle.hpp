#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hedmatch/instance.hpp"
#include "hedmatch/matrix.hpp"

namespace hedmatch {

// Layered network X -> Z -> Y with integer supplies and demands.
struct FlowNetwork {
  std::vector<std::int64_t> supply;  // per x atom
  std::vector<std::int64_t> demand;  // per y atom
  Matrix cost_xz;                    // -u(x, z)
  Matrix cost_zy;                    // v(y, z), indexed (z, y)
  std::int64_t mass_scale = 1;

  std::size_t nx() const { return supply.size(); }
  std::size_t ny() const { return demand.size(); }
  std::size_t nz() const { return cost_xz.cols(); }
};

// Weights times mass_scale must be integers within 1e-9; otherwise throws
// kRationalMass naming a scale that would work.
FlowNetwork build_network(const Problem& prob, std::int64_t mass_scale);

struct FlowSolution {
  std::vector<std::vector<std::int64_t>> flow_xz;  // [x][z], scaled units
  std::vector<std::vector<std::int64_t>> flow_zy;  // [z][y], scaled units
  std::int64_t mass_scale = 1;
  // sum u * f_xz - sum v * f_zy in mass units.
  double optimal_value = 0.0;
  // Node order: x atoms, z atoms, y atoms.
  std::vector<double> potentials;
  // Some atom's mass is split across several z atoms.
  bool splits_mass = false;
};

// Successive shortest paths with Dijkstra on reduced costs. Throws
// kUnbalanced if supply and demand totals differ.
FlowSolution solve_flow(const FlowNetwork& net);

// Worst |reduced cost| over arcs carrying flow, and worst negative reduced
// cost over all arcs (both zero at an optimum up to rounding).
struct SlacknessReport {
  double max_used_arc_reduced_cost = 0.0;
  double min_reduced_cost = 0.0;
};

SlacknessReport complementary_slackness(const FlowNetwork& net, const FlowSolution& sol);

// dual_value - optimal_value.
double compare_with_dual(const FlowSolution& sol, double dual_value);

// CSV: tail,head,flow,cost with nodes named x<i>, z<k>, y<j>.
void write_flow_csv(std::ostream& os, const FlowNetwork& net, const FlowSolution& sol);

}  // namespace hedmatch
