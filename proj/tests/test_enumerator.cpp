#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <string>

#include "rashomon/enumerator.hpp"
#include "rashomon/errors.hpp"
#include "test_support.hpp"

namespace rashomon {
namespace {

std::set<std::string> keys_of(const RashomonSet& s) {
  std::set<std::string> out;
  for (const auto& m : s.trees) out.insert(m.tree.key());
  return out;
}

EnumConfig cfg_of(double lambda, double epsilon, int depth) {
  EnumConfig c;
  c.lambda = lambda;
  c.epsilon = epsilon;
  c.depth_cap = depth;
  return c;
}

TEST(FindOptimal, PureLabelsGiveSingleLeaf) {
  const auto d = testing::make_dataset({{0, 1}, {1, 0}, {1, 1}}, {1, 1, 1});
  const auto [tree, obj] = find_optimal(d, testing::all_rows(d), cfg_of(0.01, 0, 3));
  EXPECT_TRUE(tree.is_leaf());
  EXPECT_EQ(tree.label(), 1);
  EXPECT_NEAR(obj.regularized, 0.01, 1e-12);
}

TEST(FindOptimal, XorDepthTwo) {
  const auto d = testing::xor_dataset();
  const auto [tree, obj] = find_optimal(d, testing::all_rows(d), cfg_of(0.01, 0, 2));
  EXPECT_EQ(tree.n_leaves(), 4);
  EXPECT_NEAR(obj.regularized, 0.04, 1e-12);
  EXPECT_EQ(obj.misclass_count, 0U);
}

TEST(FindOptimal, XorDepthOne) {
  // Oracle: a single leaf already has 2/4 errors, so it beats every one-split
  // tree (2/4 errors, 2 leaves, 0.52).
  const auto d = testing::xor_dataset();
  const auto rows = testing::all_rows(d);
  const auto oracle = brute_force_enumerate(d, rows, cfg_of(0.01, 0.05, 1));
  ASSERT_FALSE(oracle.trees.empty());
  EXPECT_NEAR(oracle.optimal.regularized, 0.51, 1e-12);
  double best_split = 1e9;
  for (const auto& m : oracle.trees) {
    if (!m.tree.is_leaf()) best_split = std::min(best_split, m.objective.regularized);
  }
  EXPECT_NEAR(best_split, 0.52, 1e-12);

  const auto [tree, obj] = find_optimal(d, rows, cfg_of(0.01, 0, 1));
  EXPECT_NEAR(obj.regularized, 0.51, 1e-12);
  EXPECT_TRUE(tree.is_leaf());
  // Tied majority: smallest key wins, which is label 0.
  EXPECT_EQ(tree.label(), 0);
}

TEST(FindOptimal, EmptyRowsIsContractViolation) {
  const auto d = testing::xor_dataset();
  EXPECT_THROW(find_optimal(d, std::vector<RowIndex>{}, cfg_of(0.01, 0, 2)), ContractViolation);
}

TEST(EnumConfigTest, RejectsInvalid) {
  EXPECT_THROW(cfg_of(-0.1, 0, 2).validate(), ConfigError);
  EXPECT_THROW(cfg_of(0.01, -0.1, 2).validate(), ConfigError);
  EXPECT_THROW(cfg_of(0.01, 0, -1).validate(), ConfigError);
  auto c = cfg_of(0.01, 0, 2);
  c.max_trees = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Enumerate, PureLabelsNarrowEpsilon) {
  const auto d = testing::make_dataset({{0, 1}, {1, 0}, {1, 1}}, {0, 0, 0});
  const auto s = enumerate_rashomon(d, testing::all_rows(d), cfg_of(0.01, 0.005, 3));
  ASSERT_EQ(s.size(), 1U);
  EXPECT_TRUE(s.trees[0].tree.is_leaf());
  EXPECT_FALSE(s.truncated);
}

TEST(Enumerate, XorGroundTruth) {
  const auto d = testing::xor_dataset();
  const auto s = enumerate_rashomon(d, testing::all_rows(d), cfg_of(0.01, 0.02, 2));
  ASSERT_EQ(s.size(), 2U);
  std::set<FeatureIndex> roots;
  for (const auto& m : s.trees) {
    EXPECT_NEAR(m.objective.regularized, 0.04, 1e-12);
    EXPECT_EQ(m.tree.n_leaves(), 4);
    roots.insert(m.tree.feature());
  }
  EXPECT_EQ(roots, (std::set<FeatureIndex>{0, 1}));
  EXPECT_EQ(keys_of(s), keys_of(brute_force_enumerate(d, testing::all_rows(d), cfg_of(0.01, 0.02, 2))));
}

TEST(Enumerate, BoundaryIsInclusive) {
  // XOR at depth 2: the 3-leaf trees score 1/4 + 0.03 = 0.28, exactly 0.24
  // above the optimum.
  const auto d = testing::xor_dataset();
  const auto rows = testing::all_rows(d);
  const auto at = enumerate_rashomon(d, rows, cfg_of(0.01, 0.24, 2));
  const auto below = enumerate_rashomon(d, rows, cfg_of(0.01, 0.2399, 2));
  EXPECT_GT(at.size(), below.size());
  bool has_boundary = false;
  for (const auto& m : at.trees) has_boundary |= std::abs(m.objective.regularized - 0.28) < 1e-12;
  EXPECT_TRUE(has_boundary);
}

TEST(Enumerate, SortedByObjectiveThenKey) {
  const auto d = testing::random_dataset(30, 5, 2, 0.1, 3);
  const auto s = enumerate_rashomon(d, testing::all_rows(d), cfg_of(0.01, 0.1, 2));
  ASSERT_GT(s.size(), 2U);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const auto& a = s.trees[i - 1];
    const auto& b = s.trees[i];
    const bool ordered = a.objective.regularized < b.objective.regularized - 1e-12 ||
                         (std::abs(a.objective.regularized - b.objective.regularized) <= 1e-12 &&
                          a.tree.key() < b.tree.key());
    EXPECT_TRUE(ordered) << i;
  }
}

TEST(Enumerate, ObjectivesMatchDirectEvaluation) {
  const auto d = testing::random_dataset(40, 6, 3, 0.1, 17);
  const auto rows = testing::all_rows(d);
  const auto s = enumerate_rashomon(d, rows, cfg_of(0.01, 0.05, 3));
  for (const auto& m : s.trees) {
    const auto o = objective(m.tree, d, rows, 0.01);
    EXPECT_EQ(o.misclass_count, m.objective.misclass_count);
    EXPECT_NEAR(o.regularized, m.objective.regularized, 1e-12);
    EXPECT_TRUE(within_threshold(o.regularized, s.optimal.regularized + 0.05));
    EXPECT_NO_THROW(m.tree.validate(d.n_features(), 3));
  }
}

TEST(Enumerate, TruncationFlagsAndStaysComplete) {
  const auto d = testing::random_dataset(40, 6, 2, 0.2, 5);
  const auto rows = testing::all_rows(d);
  auto big = cfg_of(0.01, 0.1, 2);
  const auto full = enumerate_rashomon(d, rows, big);
  ASSERT_FALSE(full.truncated);
  ASSERT_GT(full.size(), 10U);

  auto capped = big;
  capped.max_trees = full.size() / 2;
  const auto part = enumerate_rashomon(d, rows, capped);
  EXPECT_TRUE(part.truncated);
  EXPECT_LE(part.size(), capped.max_trees);
  EXPECT_LT(part.effective_epsilon, big.epsilon);
  // Complete at the effective threshold: exactly the full members within it.
  std::set<std::string> expected;
  for (const auto& m : full.trees) {
    if (within_threshold(m.objective.regularized, full.optimal.regularized + part.effective_epsilon)) {
      expected.insert(m.tree.key());
    }
  }
  EXPECT_EQ(keys_of(part), expected);
}

TEST(Enumerate, OptimumMembershipAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto d = testing::random_dataset(35, 6, 2, 0.15, seed);
    const auto rows = testing::all_rows(d);
    const auto c = cfg_of(0.01, 0.03, 3);
    const auto [opt, obj] = find_optimal(d, rows, c);
    const auto a = enumerate_rashomon(d, rows, c);
    const auto b = enumerate_rashomon(d, rows, c);
    EXPECT_NEAR(a.optimal.regularized, obj.regularized, 1e-12);
    EXPECT_TRUE(keys_of(a).count(opt.key())) << seed;
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.trees[i].tree.key(), b.trees[i].tree.key());
  }
}

TEST(Enumerate, SubsetOfRows) {
  const auto d = testing::random_dataset(60, 5, 2, 0.1, 8);
  std::vector<RowIndex> rows;
  for (RowIndex r = 0; r < 60; r += 3) rows.push_back(r);
  const auto c = cfg_of(0.01, 0.05, 2);
  EXPECT_EQ(keys_of(enumerate_rashomon(d, rows, c)), keys_of(brute_force_enumerate(d, rows, c)));
  EXPECT_EQ(keys_of(enumerate_rashomon(d, rows, c)),
            keys_of(enumerate_rashomon(d.select_rows(rows), testing::all_rows(d.select_rows(rows)), c)));
}

TEST(BruteForce, GuardIsEnforced) {
  const auto wide = testing::random_dataset(10, 9, 2, 0, 1);
  EXPECT_THROW(brute_force_enumerate(wide, testing::all_rows(wide), cfg_of(0.01, 0, 2)), ContractViolation);
  const auto d = testing::xor_dataset();
  EXPECT_THROW(brute_force_enumerate(d, testing::all_rows(d), cfg_of(0.01, 0, 3)), ContractViolation);
}

TEST(BruteForce, PureLabels) {
  const auto d = testing::make_dataset({{0, 1}, {1, 1}}, {1, 1});
  const auto s = brute_force_enumerate(d, testing::all_rows(d), cfg_of(0.01, 0.005, 2));
  ASSERT_EQ(s.size(), 1U);
  EXPECT_TRUE(s.trees[0].tree.is_leaf());
}

TEST(Property, OracleEquivalence) {
  Rng rng(2024);
  const double lambdas[] = {0.0, 0.01, 0.05};
  for (int inst = 0; inst < 60; ++inst) {
    const std::size_t n_rows = 5 + uniform_below(rng, 36);
    const std::size_t n_feat = 1 + uniform_below(rng, 6);
    const std::size_t n_cls = 2 + uniform_below(rng, 2);
    const auto d = testing::random_dataset(n_rows, n_feat, n_cls, 0.2, rng());
    auto c = cfg_of(lambdas[uniform_below(rng, 3)], 0.1 * uniform_unit(rng),
                    static_cast<int>(uniform_below(rng, 3)));
    if (c.lambda == 0.0) c.depth_cap = std::min(c.depth_cap, 1);  // keeps lambda=0 sets small
    const auto rows = testing::all_rows(d);
    const auto fast = enumerate_rashomon(d, rows, c);
    const auto oracle = brute_force_enumerate(d, rows, c);
    ASSERT_FALSE(fast.truncated);
    EXPECT_NEAR(fast.optimal.regularized, oracle.optimal.regularized, 1e-12) << inst;
    EXPECT_EQ(keys_of(fast), keys_of(oracle)) << "instance " << inst << " rows " << n_rows
                                              << " features " << n_feat << " depth " << c.depth_cap;
    EXPECT_EQ(keys_of(fast).size(), fast.size());
  }
}

TEST(Property, OracleEquivalenceOnLargeSets) {
  std::size_t largest = 0;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto d = testing::random_dataset(40, 6, 2, 0.4, 500 + seed);
    const auto rows = testing::all_rows(d);
    const auto c = cfg_of(0.01, 0.1, 2);
    const auto fast = enumerate_rashomon(d, rows, c);
    EXPECT_EQ(keys_of(fast), keys_of(brute_force_enumerate(d, rows, c))) << seed;
    largest = std::max(largest, fast.size());
  }
  EXPECT_GT(largest, 100U);
}

TEST(Property, MonotoneInEpsilon) {
  const double grid[] = {0.0, 0.01, 0.02, 0.05, 0.1};
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto d = testing::random_dataset(40, 6, 2, 0.15, 100 + seed);
    const auto rows = testing::all_rows(d);
    std::set<std::string> prev;
    for (const double eps : grid) {
      const auto cur = keys_of(enumerate_rashomon(d, rows, cfg_of(0.01, eps, 3)));
      EXPECT_TRUE(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) << eps;
      prev = cur;
    }
  }
}

}  // namespace
}  // namespace rashomon
