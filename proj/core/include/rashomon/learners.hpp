#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rashomon/committee.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

struct ForestConfig {
  std::size_t n_trees = 100;
  int max_depth = 8;
  /// Features drawn per split; 0 means ceil(sqrt(n_features)).
  std::size_t feature_subsample = 0;
  bool bootstrap = true;
  std::uint64_t seed = 0;

  void validate() const;
};

/// CART-style tree on `rows` (repeats allowed, as in a bootstrap sample).
///
/// Each node draws features without replacement until `features_per_split`
/// of them separate its rows, and splits on the one with the lowest weighted
/// Gini impurity (ties: lower feature index). Zero-gain splits are allowed.
/// A node becomes a majority leaf (ties: smallest class id) when pure, at the
/// depth cap, or when no feature separates its rows.
SparseTree greedy_tree(const BinaryDataset& data, std::span<const RowIndex> rows, int depth_cap,
                       std::size_t features_per_split, std::uint64_t seed);

/// Bagged greedy trees as an unweighted committee.
Committee train_forest(const BinaryDataset& data, std::span<const RowIndex> rows,
                       const ForestConfig& cfg);

}  // namespace rashomon
