#include "hedmatch/generators.hpp"

#include <algorithm>
#include <random>

#include "hedmatch/error.hpp"

namespace hedmatch {
namespace {

// mt19937_64 output is fixed by the standard; the conversions below are too,
// unlike the <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

// A composition of 16 into `parts` positive sixteenths.
std::vector<double> sixteenths(Rng& rng, std::size_t parts) {
  std::vector<int> cuts(15);
  for (int i = 0; i < 15; ++i) cuts[static_cast<std::size_t>(i)] = i + 1;
  for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng.below(i)]);
  cuts.resize(parts - 1);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w;
  int prev = 0;
  for (int c : cuts) {
    w.push_back((c - prev) / 16.0);
    prev = c;
  }
  w.push_back((16 - prev) / 16.0);
  return w;
}

Instance quadratic_pair(SpaceGrid x, SpaceGrid y, SpaceGrid z, double alpha) {
  Instance inst;
  inst.mu = DiscreteMeasure::uniform(x.size());
  inst.nu = DiscreteMeasure::uniform(y.size());
  inst.x_grid = std::move(x);
  inst.y_grid = std::move(y);
  inst.z_grid = std::move(z);
  inst.u_cost = CostSpec::scaled_quadratic(-1, alpha);
  inst.v_cost = CostSpec::scaled_quadratic(1, 1.0);
  return inst;
}

}  // namespace

Instance make_t1() {
  return quadratic_pair(SpaceGrid::line({0.0}), SpaceGrid::line({1.0}),
                        SpaceGrid::line({0.0, 0.5, 1.0}), 1.0);
}

Instance make_t3() {
  return quadratic_pair(SpaceGrid::line({0.0, 1.0}), SpaceGrid::line({0.0, 1.0}),
                        SpaceGrid::line({0.0, 0.5, 1.0}), 1.0);
}

Instance make_uniform_shift(std::size_t n, double alpha) {
  if (n < 2) throw Error(ErrorKind::kPrecondition, "uniform shift needs n >= 2");
  SpaceGrid x = SpaceGrid::linspace(0.0, 1.0, n);
  SpaceGrid y = SpaceGrid::linspace(1.0, 2.0, n);
  SpaceGrid z = SpaceGrid::linspace(0.5, 1.5, n);
  return quadratic_pair(std::move(x), std::move(y), std::move(z), alpha);
}

Instance make_random_table(std::uint64_t seed, std::size_t nx, std::size_t ny, std::size_t nz) {
  if (nx == 0 || ny == 0 || nz == 0 || nx > 16 || ny > 16) {
    throw Error(ErrorKind::kPrecondition, "random table needs 1 <= nx, ny <= 16 and nz >= 1");
  }
  Rng rng(seed);
  Instance inst;
  std::vector<double> xs(nx), ys(ny), zs(nz);
  for (std::size_t i = 0; i < nx; ++i) xs[i] = static_cast<double>(i);
  for (std::size_t i = 0; i < ny; ++i) ys[i] = static_cast<double>(i);
  for (std::size_t i = 0; i < nz; ++i) zs[i] = static_cast<double>(i);
  inst.x_grid = SpaceGrid::line(xs);
  inst.y_grid = SpaceGrid::line(ys);
  inst.z_grid = SpaceGrid::line(zs);
  inst.mu = DiscreteMeasure::from_weights(sixteenths(rng, nx));
  inst.nu = DiscreteMeasure::from_weights(sixteenths(rng, ny));
  Matrix u(nx, nz), v(ny, nz);
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t k = 0; k < nz; ++k) u(i, k) = 2.0 * rng.unit() - 1.0;
  }
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t k = 0; k < nz; ++k) v(j, k) = 2.0 * rng.unit() - 1.0;
  }
  inst.u_cost = CostSpec::tabulated(std::move(u));
  inst.v_cost = CostSpec::tabulated(std::move(v));
  return inst;
}

Instance make_quadratic_1d(double alpha) {
  std::vector<double> x(8), y(8), z(53);
  for (int i = 0; i < 8; ++i) {
    x[static_cast<std::size_t>(i)] = i / 8.0;
    y[static_cast<std::size_t>(i)] = i / 8.0 + 0.75;
  }
  for (int k = 0; k <= 52; ++k) z[static_cast<std::size_t>(k)] = k / 32.0;
  return quadratic_pair(SpaceGrid::line(x), SpaceGrid::line(y), SpaceGrid::line(z), alpha);
}

Instance make_random_bilinear(std::uint64_t seed, std::size_t dim) {
  if (dim != 1 && dim != 2) throw Error(ErrorKind::kPrecondition, "bilinear generator: dim 1 or 2");
  Rng rng(seed);
  constexpr std::size_t kAtoms = 5;
  auto random_grid = [&] {
    SpaceGrid g;
    g.dim = dim;
    for (std::size_t i = 0; i < kAtoms; ++i) {
      Point p(dim);
      for (auto& c : p) c = rng.unit();
      g.points.push_back(std::move(p));
    }
    return g;
  };
  Instance inst;
  inst.x_grid = random_grid();
  inst.y_grid = random_grid();
  if (dim == 2) {
    inst.z_grid.dim = 2;
    inst.z_grid.points = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}};
  } else {
    inst.z_grid = SpaceGrid::line({0.0, 0.25, 0.5, 0.75, 1.0});
  }
  inst.mu = DiscreteMeasure::uniform(kAtoms);
  inst.nu = DiscreteMeasure::uniform(kAtoms);
  inst.u_cost = CostSpec::bilinear(1);
  inst.v_cost = CostSpec::bilinear(1);
  return inst;
}

}  // namespace hedmatch
