#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "hedmatch/costs.hpp"
#include "hedmatch/error.hpp"

namespace hedmatch {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::kParse;
}

TEST(EvalCost, Examples) {
  EXPECT_DOUBLE_EQ(eval_cost(CostSpec::scaled_quadratic(-1, 1.0), {0.0}, {0.5}), -0.125);
  EXPECT_DOUBLE_EQ(eval_cost(CostSpec::bilinear(1), {1.0}, {-1.0}), -1.0);
  EXPECT_DOUBLE_EQ(eval_cost(CostSpec::power(1, 2.0), {0.0, 0.0}, {3.0, 4.0}), 25.0);
}

TEST(EvalCost, Errors) {
  EXPECT_EQ(kind_of([] { eval_cost(CostSpec::bilinear(1), {1.0}, {1.0, 2.0}); }),
            ErrorKind::kDimensionMismatch);
  EXPECT_EQ(kind_of([] { eval_cost(CostSpec::tabulated(Matrix(1, 1)), {0.0}, {0.0}); }),
            ErrorKind::kMissingTable);
  const auto g = SpaceGrid::line({0.0});
  EXPECT_EQ(kind_of([&] { eval_cost(CostSpec::tabulated(Matrix{}), g, 0, g, 0); }),
            ErrorKind::kMissingTable);
}

TEST(EvalCost, TableByIndexWithSign) {
  Matrix t = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CostSpec c = CostSpec::tabulated(t);
  const auto g = SpaceGrid::line({0.0, 1.0});
  EXPECT_EQ(eval_cost(c, g, 1, g, 0), 3.0);
  c.sign = -1;
  EXPECT_EQ(eval_cost(c, g, 0, g, 1), -2.0);
}

TEST(Gradient, Examples) {
  EXPECT_EQ(eval_cost_gradient_x(CostSpec::bilinear(1), {7.0, -1.0}, {2.0, 3.0}),
            (Point{2.0, 3.0}));
  EXPECT_DOUBLE_EQ(eval_cost_gradient_x(CostSpec::scaled_quadratic(-1, 2.0), {1.0}, {0.5})[0],
                   -1.0);
  const Point g = eval_cost_gradient_x(CostSpec::power(1, 2.0), {1.0, 0.0}, {0.0, 0.0});
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 0.0);
}

TEST(Gradient, Errors) {
  EXPECT_EQ(kind_of([] { eval_cost_gradient_x(CostSpec::tabulated(Matrix(1, 1)), {0.0}, {0.0}); }),
            ErrorKind::kUnsupported);
  EXPECT_EQ(kind_of([] { eval_cost_gradient_x(CostSpec::power(1, 1.5), {0.5}, {0.5}); }),
            ErrorKind::kSingularPoint);
}

TEST(Gradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> expo(1.5, 3.0);
  const double h = 1e-5;
  int probes = 0;
  while (probes < 100) {
    const std::size_t dim = 1 + rng() % 3;
    Point x(dim), z(dim);
    for (auto& c : x) c = coord(rng);
    for (auto& c : z) c = coord(rng);
    double dist2 = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dist2 += (x[i] - z[i]) * (x[i] - z[i]);
    if (dist2 < 1e-2) continue;
    const int sign = (rng() % 2) ? 1 : -1;
    CostSpec spec;
    switch (probes % 3) {
      case 0: spec = CostSpec::bilinear(sign); break;
      case 1: spec = CostSpec::scaled_quadratic(sign, expo(rng)); break;
      default: spec = CostSpec::power(sign, expo(rng)); break;
    }
    const Point g = eval_cost_gradient_x(spec, x, z);
    for (std::size_t i = 0; i < dim; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (eval_cost(spec, xp, z) - eval_cost(spec, xm, z)) / (2.0 * h);
      EXPECT_NEAR(g[i], fd, 1e-6) << "family " << to_string(spec.family);
    }
    ++probes;
  }
}

TEST(SpenceMirrlees, AnalyticFamilies) {
  const auto x = SpaceGrid::linspace(0.0, 1.0, 5);
  const auto z = SpaceGrid::linspace(0.0, 1.0, 4);
  EXPECT_EQ(spence_mirrlees_check(CostSpec::bilinear(1), x, z).status, CheckStatus::kPass);
  EXPECT_EQ(spence_mirrlees_check(CostSpec::scaled_quadratic(-1, 3.0), x, z).status,
            CheckStatus::kPass);
  EXPECT_EQ(spence_mirrlees_check(CostSpec::power(1, 2.0), x, z).status, CheckStatus::kPass);
}

TEST(SpenceMirrlees, PowerOneFailsWithWitness) {
  const auto x = SpaceGrid::line({0.5});
  const auto z = SpaceGrid::line({0.0, 0.25, 1.0});
  const CheckReport r = spence_mirrlees_check(CostSpec::power(1, 1.0), x, z);
  EXPECT_EQ(r.status, CheckStatus::kFail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses.front().source, 0u);
  EXPECT_EQ(r.witnesses.front().z_first, 0u);
  EXPECT_EQ(r.witnesses.front().z_second, 1u);
}

TEST(SpenceMirrlees, PowerOneFailsEvenWithoutCollision) {
  const auto x = SpaceGrid::line({0.5});
  const auto z = SpaceGrid::line({0.0, 1.0});
  EXPECT_EQ(spence_mirrlees_check(CostSpec::power(1, 1.0), x, z).status, CheckStatus::kFail);
}

TEST(SpenceMirrlees, Tables) {
  const auto x = SpaceGrid::linspace(0.0, 1.0, 4);
  const auto z = SpaceGrid::line({0.0, 1.0});
  // Rows of x * z: slopes in x are z, distinct per z.
  Matrix injective(4, 2), flat(4, 2);
  for (Index i = 0; i < 4; ++i) {
    for (Index k = 0; k < 2; ++k) {
      injective(i, k) = x[i][0] * z[k][0];
      flat(i, k) = x[i][0];
    }
  }
  EXPECT_EQ(spence_mirrlees_check(CostSpec::tabulated(injective), x, z).status,
            CheckStatus::kPass);
  EXPECT_EQ(spence_mirrlees_check(CostSpec::tabulated(flat), x, z).status, CheckStatus::kFail);
  const auto irregular = SpaceGrid::line({0.0, 0.1, 0.5, 1.0});
  EXPECT_EQ(spence_mirrlees_check(CostSpec::tabulated(injective), irregular, z).status,
            CheckStatus::kPassWithWarning);
}

TEST(Lipschitz, Examples) {
  EXPECT_DOUBLE_EQ(lipschitz_bound_k(CostSpec::bilinear(1), SpaceGrid::linspace(0, 1, 3),
                                     SpaceGrid::linspace(0, 1, 5)),
                   1.0);
  EXPECT_DOUBLE_EQ(lipschitz_bound_k(CostSpec::scaled_quadratic(-1, 2.0), SpaceGrid::line({0, 1}),
                                     SpaceGrid::line({0, 1})),
                   2.0);
  EXPECT_DOUBLE_EQ(lipschitz_bound_k(CostSpec::scaled_quadratic(1, 1.0), SpaceGrid::line({0.5}),
                                     SpaceGrid::line({0.5})),
                   0.0);
  EXPECT_EQ(kind_of([] {
              lipschitz_bound_k(CostSpec::tabulated(Matrix(1, 1)), SpaceGrid::line({0}),
                                SpaceGrid::line({0}));
            }),
            ErrorKind::kUnsupported);
}

}  // namespace
}  // namespace hedmatch
