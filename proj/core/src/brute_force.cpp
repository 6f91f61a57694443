#include <algorithm>
#include <map>
#include <set>

#include "rashomon/enumerator.hpp"
#include "rashomon/errors.hpp"

namespace rashomon {

namespace {

// Every tree over `rows` with depth <= depth whose splits leave both branches
// nonempty, with majority-labeled leaves (all tied labels).
std::vector<SparseTree> all_trees(const BinaryDataset& data, const std::vector<RowIndex>& rows,
                                  int depth) {
  std::vector<SparseTree> out;
  std::map<ClassId, std::size_t> counts;
  for (const auto r : rows) ++counts[data.label(r)];
  std::size_t top = 0;
  for (const auto& [label, n] : counts) top = std::max(top, n);
  for (const auto& [label, n] : counts) {
    if (n == top) out.push_back(SparseTree::leaf(label));
  }
  if (depth == 0) return out;
  for (FeatureIndex f = 0; f < data.n_features(); ++f) {
    std::vector<RowIndex> zero;
    std::vector<RowIndex> one;
    for (const auto r : rows) (data.feature(r, f) != 0 ? one : zero).push_back(r);
    if (zero.empty() || one.empty()) continue;
    const auto zeros = all_trees(data, zero, depth - 1);
    const auto ones = all_trees(data, one, depth - 1);
    for (const auto& z : zeros) {
      for (const auto& o : ones) out.push_back(SparseTree::split(f, z, o));
    }
  }
  return out;
}

}  // namespace

RashomonSet brute_force_enumerate(const BinaryDataset& data, std::span<const RowIndex> rows,
                                  const EnumConfig& cfg) {
  cfg.validate();
  if (data.n_features() > 8 || cfg.depth_cap > 2) {
    throw ContractViolation("brute force enumeration is limited to 8 features and depth 2");
  }
  if (rows.empty()) throw ContractViolation("enumeration needs at least one row");
  const std::vector<RowIndex> row_list(rows.begin(), rows.end());
  const auto trees = all_trees(data, row_list, cfg.depth_cap);

  std::vector<ScoredTree> scored;
  scored.reserve(trees.size());
  for (const auto& t : trees) scored.push_back({t, objective(t, data, rows, cfg.lambda)});
  const auto best = std::min_element(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.objective.regularized < b.objective.regularized;
  });

  RashomonSet out;
  out.epsilon = cfg.epsilon;
  out.effective_epsilon = cfg.epsilon;
  const double bound = best->objective.regularized + cfg.epsilon;
  std::set<std::string> seen;
  std::vector<std::pair<std::string, ScoredTree>> kept;
  for (auto& s : scored) {
    if (!within_threshold(s.objective.regularized, bound)) continue;
    auto key = s.tree.key();
    if (!seen.insert(key).second) continue;
    kept.emplace_back(std::move(key), std::move(s));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.objective.regularized != b.second.objective.regularized) {
      return a.second.objective.regularized < b.second.objective.regularized;
    }
    return a.first < b.first;
  });
  for (auto& [key, s] : kept) out.trees.push_back(std::move(s));
  out.optimal = out.trees.front().objective;
  if (out.trees.size() > cfg.max_trees) {
    out.trees.resize(cfg.max_trees);
    out.truncated = true;
  }
  return out;
}

}  // namespace rashomon
