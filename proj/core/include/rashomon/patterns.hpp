#pragma once

#include <cstddef>
#include <vector>

#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/tree.hpp"

namespace rashomon {

/// Trees of a Rashomon set that predict identically on every reference row.
struct ClassificationPattern {
  std::vector<ClassId> predictions;
  /// Indices into RashomonSet::trees, ascending.
  std::vector<std::size_t> member_tree_ids;
  std::size_t representative_id = 0;

  std::size_t multiplicity() const noexcept { return member_tree_ids.size(); }
};

std::vector<ClassId> compute_pattern(const SparseTree& tree, const FeatureView& reference);

/// Partitions `set.trees` by prediction vector on `reference`.
///
/// The representative of a group is its member with the fewest leaves (ties:
/// smallest canonical key). Groups are ordered by their best member's
/// objective, then by that member's key, so the result does not depend on
/// the order of `set.trees`.
std::vector<ClassificationPattern> group_patterns(const RashomonSet& set,
                                                  const FeatureView& reference);

std::vector<SparseTree> unique_representatives(const std::vector<ClassificationPattern>& groups,
                                               const RashomonSet& set);

}  // namespace rashomon
