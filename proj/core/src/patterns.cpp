#include "rashomon/patterns.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "rashomon/errors.hpp"

namespace rashomon {

namespace {

struct PredictionHash {
  std::size_t operator()(const std::vector<ClassId>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto c : v) {
      h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL;
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

bool max_feature_fits(const SparseTree& t, std::size_t width) {
  if (t.is_leaf()) return true;
  return t.feature() < width && max_feature_fits(t.zero_branch(), width) &&
         max_feature_fits(t.one_branch(), width);
}

}  // namespace

std::vector<ClassId> compute_pattern(const SparseTree& tree, const FeatureView& reference) {
  if (!max_feature_fits(tree, reference.n_features())) {
    throw ContractViolation("reference rows are narrower than the tree's features");
  }
  std::vector<ClassId> out(reference.size());
  for (std::size_t i = 0; i < reference.size(); ++i) {
    out[i] = tree.predict_unchecked(reference.row(i));
  }
  return out;
}

std::vector<ClassificationPattern> group_patterns(const RashomonSet& set,
                                                  const FeatureView& reference) {
  if (set.trees.empty()) throw ContractViolation("cannot group an empty Rashomon set");

  std::unordered_map<std::vector<ClassId>, std::size_t, PredictionHash> index;
  std::vector<ClassificationPattern> groups;
  for (std::size_t i = 0; i < set.trees.size(); ++i) {
    auto pred = compute_pattern(set.trees[i].tree, reference);
    const auto [it, inserted] = index.try_emplace(std::move(pred), groups.size());
    if (inserted) {
      groups.push_back(ClassificationPattern{it->first, {}, i});
    }
    groups[it->second].member_tree_ids.push_back(i);
  }

  struct Rank {
    double best_objective;
    std::string best_key;
  };
  std::vector<Rank> ranks(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    auto& grp = groups[g];
    std::size_t rep = grp.member_tree_ids.front();
    std::string rep_key = set.trees[rep].tree.key();
    std::size_t best = rep;
    std::string best_key = rep_key;
    for (const auto id : grp.member_tree_ids) {
      const auto& t = set.trees[id];
      if (id == rep) continue;
      const std::string key = t.tree.key();
      const int leaves = t.tree.n_leaves();
      const int rep_leaves = set.trees[rep].tree.n_leaves();
      if (leaves < rep_leaves || (leaves == rep_leaves && key < rep_key)) {
        rep = id;
        rep_key = key;
      }
      const double obj = t.objective.regularized;
      const double best_obj = set.trees[best].objective.regularized;
      if (obj < best_obj || (obj == best_obj && key < best_key)) {
        best = id;
        best_key = key;
      }
    }
    grp.representative_id = rep;
    ranks[g] = Rank{set.trees[best].objective.regularized, std::move(best_key)};
  }

  std::vector<std::size_t> order(groups.size());
  for (std::size_t g = 0; g < order.size(); ++g) order[g] = g;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ranks[a].best_objective != ranks[b].best_objective) {
      return ranks[a].best_objective < ranks[b].best_objective;
    }
    return ranks[a].best_key < ranks[b].best_key;
  });
  std::vector<ClassificationPattern> sorted;
  sorted.reserve(groups.size());
  for (const auto g : order) sorted.push_back(std::move(groups[g]));
  return sorted;
}

std::vector<SparseTree> unique_representatives(const std::vector<ClassificationPattern>& groups,
                                               const RashomonSet& set) {
  std::vector<SparseTree> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(set.trees.at(g.representative_id).tree);
  return out;
}

}  // namespace rashomon
