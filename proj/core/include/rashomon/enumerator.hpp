#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "rashomon/dataset.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

struct EnumConfig {
  double lambda = 0.01;
  /// Additive slack on the regularized objective.
  double epsilon = 0.0;
  int depth_cap = 3;
  std::size_t max_trees = 200000;

  void validate() const;
};

struct ScoredTree {
  SparseTree tree;
  Objective objective;
};

/// All trees whose regularized objective is within `epsilon` of the optimum,
/// sorted by (objective, canonical key).
struct RashomonSet {
  Objective optimal;
  double epsilon = 0.0;
  /// Equal to `epsilon` unless truncated; then the largest threshold whose
  /// complete set fit under max_trees.
  double effective_epsilon = 0.0;
  bool truncated = false;
  std::vector<ScoredTree> trees;

  std::size_t size() const noexcept { return trees.size(); }
};

/// Objectives closer than this are treated as equal when testing membership.
inline constexpr double kObjectiveTolerance = 1e-9;

inline bool within_threshold(double value, double bound) noexcept {
  return value <= bound + kObjectiveTolerance;
}

/// Empirical risk minimizer within the depth cap; ties go to the smallest
/// canonical key.
std::pair<SparseTree, Objective> find_optimal(const BinaryDataset& data,
                                              std::span<const RowIndex> rows,
                                              const EnumConfig& cfg);

/// Exact Rashomon set by branch-and-bound over (row subset, remaining depth)
/// subproblems.
///
/// Splits must send at least one of the subproblem's rows to each branch, and
/// each leaf predicts a majority class of its rows (one tree per tied
/// majority class). Members with objective <= optimum + epsilon are returned.
/// When more than `max_trees` members exist the result is the complete set at
/// the largest smaller threshold that fits, with `truncated` set.
RashomonSet enumerate_rashomon(const BinaryDataset& data, std::span<const RowIndex> rows,
                               const EnumConfig& cfg);

/// Exhaustive reference enumeration over the same model space. Only for
/// n_features <= 8 and depth_cap <= 2.
RashomonSet brute_force_enumerate(const BinaryDataset& data, std::span<const RowIndex> rows,
                                  const EnumConfig& cfg);

}  // namespace rashomon
