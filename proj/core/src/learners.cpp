#include "rashomon/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "rashomon/errors.hpp"
#include "rashomon/random.hpp"

namespace rashomon {

void ForestConfig::validate() const {
  if (n_trees < 1) throw ConfigError("forest needs n_trees >= 1");
  if (max_depth < 1) throw ConfigError("forest needs max_depth >= 1");
}

namespace {

class GreedyBuilder {
 public:
  GreedyBuilder(const BinaryDataset& data, std::size_t features_per_split, std::uint64_t seed)
      : data_(data),
        k_(std::clamp<std::size_t>(features_per_split, 1, data.n_features())),
        rng_(seed),
        pool_(data.n_features()) {
    std::iota(pool_.begin(), pool_.end(), FeatureIndex{0});
  }

  SparseTree build(const std::vector<RowIndex>& rows, int depth_left) {
    const auto counts = class_counts(rows);
    const ClassId majority = argmax(counts);
    const std::size_t n = rows.size();
    if (depth_left == 0 || counts[static_cast<std::size_t>(majority)] == n) {
      return SparseTree::leaf(majority);
    }
    // Features are drawn without replacement until k_ of them separate the
    // rows (or the pool runs out), as in scikit-learn. Zero-gain splits are
    // allowed, so XOR-like structure is still found below the root.
    constexpr double kTie = 1e-12;
    double best_impurity = std::numeric_limits<double>::infinity();
    bool found = false;
    FeatureIndex best_feature = 0;
    std::size_t usable = 0;
    for (std::size_t i = 0; i < pool_.size() && usable < k_; ++i) {
      std::swap(pool_[i], pool_[i + uniform_below(rng_, pool_.size() - i)]);
      const FeatureIndex f = pool_[i];
      std::vector<std::size_t> zero(data_.n_classes(), 0);
      std::vector<std::size_t> one(data_.n_classes(), 0);
      std::size_t n_one = 0;
      for (const auto r : rows) {
        if (data_.feature(r, f) != 0) {
          ++one[static_cast<std::size_t>(data_.label(r))];
          ++n_one;
        } else {
          ++zero[static_cast<std::size_t>(data_.label(r))];
        }
      }
      if (n_one == 0 || n_one == n) continue;
      ++usable;
      const double impurity = gini(zero, n - n_one) * static_cast<double>(n - n_one) +
                              gini(one, n_one) * static_cast<double>(n_one);
      const bool better = impurity < best_impurity - kTie ||
                          (impurity <= best_impurity + kTie && f < best_feature);
      if (!found || better) {
        best_impurity = impurity;
        best_feature = f;
        found = true;
      }
    }
    if (!found) return SparseTree::leaf(majority);

    std::vector<RowIndex> zero_rows;
    std::vector<RowIndex> one_rows;
    for (const auto r : rows) (data_.feature(r, best_feature) != 0 ? one_rows : zero_rows).push_back(r);
    SparseTree zero_tree = build(zero_rows, depth_left - 1);
    SparseTree one_tree = build(one_rows, depth_left - 1);
    return SparseTree::split(best_feature, std::move(zero_tree), std::move(one_tree));
  }

 private:
  std::vector<std::size_t> class_counts(const std::vector<RowIndex>& rows) const {
    std::vector<std::size_t> counts(data_.n_classes(), 0);
    for (const auto r : rows) ++counts[static_cast<std::size_t>(data_.label(r))];
    return counts;
  }

  static ClassId argmax(const std::vector<std::size_t>& counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
      if (counts[c] > counts[best]) best = c;
    }
    return static_cast<ClassId>(best);
  }

  static double gini(const std::vector<std::size_t>& counts, std::size_t n) {
    if (n == 0) return 0.0;
    double sum_sq = 0.0;
    for (const auto c : counts) {
      const double p = static_cast<double>(c) / static_cast<double>(n);
      sum_sq += p * p;
    }
    return 1.0 - sum_sq;
  }

  const BinaryDataset& data_;
  std::size_t k_;
  Rng rng_;
  std::vector<FeatureIndex> pool_;
};

}  // namespace

SparseTree greedy_tree(const BinaryDataset& data, std::span<const RowIndex> rows, int depth_cap,
                       std::size_t features_per_split, std::uint64_t seed) {
  if (rows.empty()) throw ContractViolation("greedy_tree needs at least one row");
  if (depth_cap < 0) throw ConfigError("depth_cap must be >= 0");
  GreedyBuilder builder(data, features_per_split, seed);
  return builder.build(std::vector<RowIndex>(rows.begin(), rows.end()), depth_cap);
}

Committee train_forest(const BinaryDataset& data, std::span<const RowIndex> rows,
                       const ForestConfig& cfg) {
  cfg.validate();
  if (rows.empty()) throw ContractViolation("train_forest needs at least one row");
  const std::size_t k =
      cfg.feature_subsample != 0
          ? cfg.feature_subsample
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.n_features()))));
  std::vector<SparseTree> trees;
  trees.reserve(cfg.n_trees);
  for (std::size_t t = 0; t < cfg.n_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(cfg.seed, t);
    std::vector<RowIndex> sample;
    if (cfg.bootstrap) {
      Rng rng(derive_seed(tree_seed, 0xB007));
      sample.reserve(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        sample.push_back(rows[uniform_below(rng, rows.size())]);
      }
    } else {
      sample.assign(rows.begin(), rows.end());
    }
    trees.push_back(greedy_tree(data, sample, cfg.max_depth, k, tree_seed));
  }
  return Committee(std::move(trees));
}

}  // namespace rashomon
