#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rashomon/dataset.hpp"

namespace rashomon {

/// Binary decision tree over binary features.
///
/// Nodes are immutable and shared, so the enumerator can assemble millions of
/// trees out of common subtrees without copying. Internal nodes route rows with
/// feature value 0 to the zero branch and 1 to the one branch.
class SparseTree {
 public:
  /// Single leaf predicting class 0.
  SparseTree();

  static SparseTree leaf(ClassId label);
  static SparseTree split(FeatureIndex feature, SparseTree zero_branch, SparseTree one_branch);

  bool is_leaf() const noexcept { return node_->is_leaf; }
  ClassId label() const noexcept { return node_->label; }
  FeatureIndex feature() const noexcept { return node_->feature; }
  SparseTree zero_branch() const { return SparseTree(node_->zero); }
  SparseTree one_branch() const { return SparseTree(node_->one); }

  int depth() const noexcept { return node_->depth; }
  int n_leaves() const noexcept { return node_->n_leaves; }

  /// Leaf label reached by `row`. Throws ContractViolation when the row is too
  /// narrow for a feature the path tests.
  ClassId predict(std::span<const std::uint8_t> row) const;
  /// Unchecked variant for hot loops where the width is known to fit.
  ClassId predict_unchecked(std::span<const std::uint8_t> row) const noexcept;

  /// Prefix-free pre-order encoding; equal keys iff equal structure and labels.
  std::string key() const;
  /// `(f3 (leaf 0) (f1 (leaf 1) (leaf 0)))`
  std::string to_string() const;
  static SparseTree parse(std::string_view text);

  /// Throws ContractViolation unless every feature index is below
  /// `n_features`, no feature repeats on a root-to-leaf path, and depth is
  /// within `depth_cap` (pass a negative cap to skip that check).
  void validate(std::size_t n_features, int depth_cap = -1) const;

  bool operator==(const SparseTree& other) const { return key() == other.key(); }

 private:
  struct Node {
    bool is_leaf = true;
    ClassId label = 0;
    FeatureIndex feature = 0;
    std::shared_ptr<const Node> zero;
    std::shared_ptr<const Node> one;
    int depth = 0;
    int n_leaves = 1;
  };

  explicit SparseTree(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;
};

/// Training objective of a tree on a row subset: 0-1 misclassification rate
/// plus `lambda` per leaf.
struct Objective {
  std::size_t misclass_count = 0;
  double misclass_rate = 0.0;
  std::size_t n_leaves = 0;
  double lambda = 0.0;
  double regularized = 0.0;

  static Objective make(std::size_t misclass_count, std::size_t n_rows, std::size_t n_leaves,
                        double lambda);
};

Objective objective(const SparseTree& tree, const BinaryDataset& data,
                    std::span<const RowIndex> rows, double lambda);

/// Predictions of `tree` on the given dataset rows.
std::vector<ClassId> predict_rows(const SparseTree& tree, const BinaryDataset& data,
                                  std::span<const RowIndex> rows);

/// Free-function spellings of the tree operations.
inline ClassId predict(const SparseTree& tree, std::span<const std::uint8_t> row) {
  return tree.predict(row);
}
inline std::string canonicalize(const SparseTree& tree) { return tree.key(); }

}  // namespace rashomon
