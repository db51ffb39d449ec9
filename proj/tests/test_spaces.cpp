#include <gtest/gtest.h>

#include <random>

#include "hedmatch/error.hpp"
#include "hedmatch/generators.hpp"
#include "hedmatch/instance.hpp"
#include "hedmatch/spaces.hpp"

namespace hedmatch {
namespace {

bool has(const ValidationReport& r, ViolationCode c) {
  for (const auto& v : r) {
    if (v.code == c) return true;
  }
  return false;
}

TEST(ValidateInstance, T1IsValid) { EXPECT_TRUE(validate_instance(make_t1()).empty()); }

TEST(ValidateInstance, MassMismatch) {
  Instance inst = make_t1();
  inst.nu = DiscreteMeasure::from_weights({2.0});
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kMassMismatch));
}

TEST(ValidateInstance, NegativeWeight) {
  Instance inst = make_t3();
  inst.mu = DiscreteMeasure::from_weights({-0.1, 1.1});
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kNegativeWeight));
}

TEST(ValidateInstance, StructuralViolations) {
  Instance inst = make_t3();
  inst.z_grid = SpaceGrid::line({0.0, 0.0});
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kDuplicatePoint));

  inst = make_t3();
  inst.x_grid.points[1] = {1.0, 2.0};
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kBadDimension));

  inst = make_t3();
  inst.mu = DiscreteMeasure::from_weights({1.0});
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kMeasureSize));

  inst = make_t3();
  inst.mu.total_mass = 0.7;
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kCachedMassMismatch));

  inst = make_t3();
  inst.z_grid.points.clear();
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kEmptyGrid));

  inst = make_t3();
  inst.u_cost.alpha = -1.0;
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kBadAlpha));

  inst = make_random_table(3, 4, 4, 3);
  inst.u_cost.table = Matrix(4, 2);
  EXPECT_TRUE(has(validate_instance(inst), ViolationCode::kTableShape));
}

TEST(ValidateInstance, MassToleranceIsRelative) {
  Instance inst = make_t1();
  inst.nu = DiscreteMeasure::from_weights({1.0 + 5e-10});
  EXPECT_TRUE(validate_instance(inst).empty());
  inst.nu = DiscreteMeasure::from_weights({1.0 + 5e-9});
  EXPECT_FALSE(validate_instance(inst).empty());
}

TEST(Pushforward, AccumulatesMass) {
  const auto m = DiscreteMeasure::from_weights({0.5, 0.5});
  const std::vector<Index> map{1, 1};
  const auto lam = pushforward(map, m, 3);
  EXPECT_EQ(lam.weights, (std::vector<double>{0.0, 1.0, 0.0}));
  EXPECT_EQ(lam.total_mass, 1.0);
}

TEST(Pushforward, IdentityKeepsWeights) {
  const auto m = DiscreteMeasure::from_weights({0.3, 0.7});
  const std::vector<Index> map{0, 1};
  EXPECT_EQ(pushforward(map, m, 2).weights, m.weights);
}

TEST(Pushforward, Errors) {
  const auto m = DiscreteMeasure::from_weights({0.3, 0.7});
  const std::vector<Index> bad{0, 5};
  try {
    pushforward(bad, m, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidMap);
  }
  const std::vector<Index> short_map{0};
  EXPECT_THROW(pushforward(short_map, m, 3), Error);
  // A zero-weight atom may point anywhere.
  const auto z = DiscreteMeasure::from_weights({0.0, 1.0});
  const std::vector<Index> ok{99, 0};
  EXPECT_EQ(pushforward(ok, z, 1).weights[0], 1.0);
}

TEST(Pushforward, PreservesMassBitForBit) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> weights(17);
    for (auto& v : weights) v = w(rng);
    const auto m = DiscreteMeasure::from_weights(weights);
    std::vector<Index> map(weights.size());
    for (auto& i : map) i = rng() % 5;
    const auto lam = pushforward(map, m, 5);
    EXPECT_EQ(lam.total_mass, m.total_mass);
  }
}

TEST(TvDistance, Examples) {
  EXPECT_EQ(tv_distance(std::vector<double>{0, 1, 0}, std::vector<double>{0, 1, 0}), 0.0);
  EXPECT_EQ(tv_distance(std::vector<double>{0, 1, 0}, std::vector<double>{0, 0, 1}), 1.0);
  EXPECT_EQ(tv_distance(std::vector<double>{0.5, 0.5, 0}, std::vector<double>{0, 0.5, 0.5}), 0.5);
  EXPECT_THROW(tv_distance(std::vector<double>{1.0}, std::vector<double>{1.0, 0.0}), Error);
}

TEST(TvDistance, MetricProperties) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> w(0.0, 1.0);
  auto draw = [&] {
    std::vector<double> v(8);
    for (auto& x : v) x = w(rng);
    return v;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    EXPECT_LE(tv_distance(a, c), tv_distance(a, b) + tv_distance(b, c) + 1e-12);
    EXPECT_EQ(tv_distance(a, b), tv_distance(b, a));
    EXPECT_GE(tv_distance(a, b), 0.0);
  }
}

TEST(RegularGrid, DetectsShuffledTensorGrid) {
  SpaceGrid g;
  g.dim = 2;
  for (double y : {1.0, 0.0, 0.5}) {
    for (double x : {0.25, 0.0}) g.points.push_back({x, y});
  }
  const auto rg = detect_regular_grid(g);
  ASSERT_TRUE(rg.has_value());
  EXPECT_EQ(rg->count, (std::vector<std::size_t>{2, 3}));
  const auto multi = rg->multi_indices();
  for (Index i = 0; i < g.size(); ++i) {
    EXPECT_EQ(rg->atom(multi[i]), i);
    for (std::size_t a = 0; a < 2; ++a) {
      EXPECT_DOUBLE_EQ(g[i][a], rg->start[a] + multi[i][a] * rg->spacing[a]);
    }
  }
}

TEST(RegularGrid, RejectsIrregular) {
  EXPECT_FALSE(detect_regular_grid(SpaceGrid::line({0.0, 0.1, 0.3})).has_value());
  SpaceGrid g;
  g.dim = 2;
  g.points = {{0, 0}, {1, 0}, {0, 1}};
  EXPECT_FALSE(detect_regular_grid(g).has_value());
}

}  // namespace
}  // namespace hedmatch
