#include "rashomon/enumerator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

#include "rashomon/bitset.hpp"
#include "rashomon/errors.hpp"

namespace rashomon {

void EnumConfig::validate() const {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be >= 0");
  if (depth_cap < 0) throw ConfigError("depth_cap must be >= 0");
  if (max_trees < 1) throw ConfigError("max_trees must be >= 1");
}

namespace {

struct Entry {
  std::uint32_t misclass;
  std::uint32_t leaves;
  double cost;
  SparseTree tree;
};

using EntryList = std::vector<Entry>;

struct ListOverflow {};

struct SubproblemKey {
  RowSet rows;
  int depth;
  bool operator==(const SubproblemKey&) const = default;
};

struct SubproblemKeyHash {
  std::size_t operator()(const SubproblemKey& k) const noexcept {
    return k.rows.hash() * 31U + static_cast<std::size_t>(k.depth);
  }
};

struct Memo {
  bool has_optimum = false;
  double optimum = 0.0;
  double budget = -std::numeric_limits<double>::infinity();
  std::shared_ptr<const EntryList> list;
};

/// A memoized slice of a subproblem's sorted tree list.
struct ListView {
  std::shared_ptr<const EntryList> list;
  std::size_t count = 0;

  const Entry& operator[](std::size_t i) const { return (*list)[i]; }
};

class Search {
 public:
  Search(const BinaryDataset& data, std::size_t n_rows, const EnumConfig& cfg, bool cap_lists)
      : data_(data),
        inv_n_(1.0 / static_cast<double>(n_rows)),
        lambda_(cfg.lambda),
        max_trees_(cfg.max_trees),
        cap_lists_(cap_lists) {}

  double cost(std::size_t misclass, std::size_t leaves) const noexcept {
    return static_cast<double>(misclass) * inv_n_ + lambda_ * static_cast<double>(leaves);
  }

  bool capped() const noexcept { return capped_; }

  double optimum(const RowSet& rows, int depth) {
    Memo& memo = memo_[SubproblemKey{rows, depth}];
    if (memo.has_optimum) return memo.optimum;
    const LeafStats leaf = leaf_stats(rows);
    double best = cost(leaf.misclass, 1);
    // A pure leaf already meets the lambda * 1 floor of every tree.
    if (depth > 0 && leaf.misclass > 0 && best > 2.0 * lambda_) {
      for (std::size_t f = 0; f < data_.n_features(); ++f) {
        const RowSet one = rows & data_.column(f);
        if (one.empty()) continue;
        const RowSet zero = rows.minus(data_.column(f));
        if (zero.empty()) continue;
        const double lhs = optimum(zero, depth - 1);
        if (lhs + lambda_ >= best) continue;
        const double total = lhs + optimum(one, depth - 1);
        if (total < best) best = total;
      }
    }
    // unordered_map references survive the rehashes the recursion may cause.
    memo.has_optimum = true;
    memo.optimum = best;
    return best;
  }

  ListView enumerate(const RowSet& rows, int depth, double budget) {
    {
      const auto it = memo_.find(SubproblemKey{rows, depth});
      if (it != memo_.end() && it->second.list && budget <= it->second.budget) {
        return prefix(it->second.list, budget);
      }
    }
    const double opt = optimum(rows, depth);
    auto list = std::make_shared<EntryList>();
    if (within_threshold(opt, budget)) {
      build(rows, depth, budget, *list);
    }
    std::shared_ptr<const EntryList> frozen = std::move(list);
    Memo& slot = memo_[SubproblemKey{rows, depth}];
    slot.list = frozen;
    slot.budget = budget;
    return ListView{frozen, frozen->size()};
  }

 private:
  struct LeafStats {
    std::size_t size = 0;
    std::size_t misclass = 0;
    std::vector<ClassId> majority;
  };

  LeafStats leaf_stats(const RowSet& rows) const {
    LeafStats s;
    s.size = rows.count();
    std::size_t best = 0;
    for (std::size_t c = 0; c < data_.n_classes(); ++c) {
      const std::size_t n = rows.count_and(data_.class_rows(c));
      if (n > best) {
        best = n;
        s.majority.assign(1, static_cast<ClassId>(c));
      } else if (n == best) {
        s.majority.push_back(static_cast<ClassId>(c));
      }
    }
    s.misclass = s.size - best;
    return s;
  }

  ListView prefix(const std::shared_ptr<const EntryList>& list, double budget) const {
    const auto end = std::upper_bound(
        list->begin(), list->end(), budget,
        [](double b, const Entry& e) { return !within_threshold(e.cost, b); });
    return ListView{list, static_cast<std::size_t>(end - list->begin())};
  }

  void push(EntryList& out, Entry e) {
    out.push_back(std::move(e));
    if (out.size() > max_trees_ && !cap_lists_) throw ListOverflow{};
  }

  void build(const RowSet& rows, int depth, double budget, EntryList& out) {
    const LeafStats leaf = leaf_stats(rows);
    const double leaf_cost = cost(leaf.misclass, 1);
    if (within_threshold(leaf_cost, budget)) {
      for (const ClassId c : leaf.majority) {
        push(out, Entry{static_cast<std::uint32_t>(leaf.misclass), 1, leaf_cost,
                        SparseTree::leaf(c)});
      }
    }
    if (depth > 0 && within_threshold(2.0 * lambda_, budget)) {
      for (std::size_t f = 0; f < data_.n_features(); ++f) {
        const RowSet one = rows & data_.column(f);
        if (one.empty()) continue;
        const RowSet zero = rows.minus(data_.column(f));
        if (zero.empty()) continue;
        const double zero_opt = optimum(zero, depth - 1);
        const double one_opt = optimum(one, depth - 1);
        if (!within_threshold(zero_opt + one_opt, budget)) continue;
        const ListView zeros = enumerate(zero, depth - 1, budget - one_opt);
        const ListView ones = enumerate(one, depth - 1, budget - zero_opt);
        for (std::size_t i = 0; i < zeros.count; ++i) {
          const Entry& z = zeros[i];
          for (std::size_t j = 0; j < ones.count; ++j) {
            const Entry& o = ones[j];
            const std::uint32_t m = z.misclass + o.misclass;
            const std::uint32_t l = z.leaves + o.leaves;
            const double c = cost(m, l);
            if (!within_threshold(c, budget)) break;
            push(out, Entry{m, l, c,
                            SparseTree::split(static_cast<FeatureIndex>(f), z.tree, o.tree)});
          }
        }
      }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Entry& a, const Entry& b) { return a.cost < b.cost; });
    if (cap_lists_ && out.size() > max_trees_) {
      out.resize(max_trees_);
      capped_ = true;
    }
  }

  const BinaryDataset& data_;
  double inv_n_;
  double lambda_;
  std::size_t max_trees_;
  bool cap_lists_;
  bool capped_ = false;
  std::unordered_map<SubproblemKey, Memo, SubproblemKeyHash> memo_;
};

RowSet checked_row_set(const BinaryDataset& data, std::span<const RowIndex> rows) {
  if (rows.empty()) throw ContractViolation("enumeration needs at least one row");
  for (const auto r : rows) {
    if (r >= data.n_rows()) throw ContractViolation("row index out of range");
  }
  RowSet set = data.row_set(rows);
  if (set.count() != rows.size()) throw ContractViolation("row indices must be distinct");
  return set;
}

RashomonSet finish(const EntryList& entries, std::size_t count, std::size_t n_rows,
                   const EnumConfig& cfg, double optimum_cost) {
  RashomonSet out;
  out.epsilon = cfg.epsilon;
  out.effective_epsilon = cfg.epsilon;
  std::vector<std::pair<std::string, ScoredTree>> keyed;
  keyed.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Entry& e = entries[i];
    keyed.emplace_back(e.tree.key(),
                       ScoredTree{e.tree, Objective::make(e.misclass, n_rows, e.leaves, cfg.lambda)});
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.second.objective.regularized != b.second.objective.regularized) {
      return a.second.objective.regularized < b.second.objective.regularized;
    }
    return a.first < b.first;
  });
  out.trees.reserve(keyed.size());
  for (auto& [key, scored] : keyed) out.trees.push_back(std::move(scored));
  if (!out.trees.empty()) {
    out.optimal = out.trees.front().objective;
  } else {
    out.optimal.regularized = optimum_cost;
  }
  return out;
}

}  // namespace

RashomonSet enumerate_rashomon(const BinaryDataset& data, std::span<const RowIndex> rows,
                               const EnumConfig& cfg) {
  cfg.validate();
  const RowSet all = checked_row_set(data, rows);
  Search search(data, rows.size(), cfg, false);
  const double opt = search.optimum(all, cfg.depth_cap);
  const double budget = opt + cfg.epsilon;
  try {
    const ListView v = search.enumerate(all, cfg.depth_cap, budget);
    return finish(*v.list, v.count, rows.size(), cfg, opt);
  } catch (const ListOverflow&) {
  }

  // Too many members: find the largest budget whose complete set fits.
  double lo = opt;
  double hi = budget;
  std::shared_ptr<const EntryList> best_list;
  std::size_t best_count = 0;
  try {
    const ListView v = search.enumerate(all, cfg.depth_cap, lo);
    best_list = v.list;
    best_count = v.count;
  } catch (const ListOverflow&) {
    // Even the optima alone overflow; keep the first max_trees of them.
    Search capped(data, rows.size(), cfg, true);
    const ListView v = capped.enumerate(all, cfg.depth_cap, opt);
    RashomonSet out = finish(*v.list, v.count, rows.size(), cfg, opt);
    out.truncated = true;
    out.effective_epsilon = 0.0;
    return out;
  }
  for (int iter = 0; iter < 40 && hi - lo > kObjectiveTolerance; ++iter) {
    const double mid = 0.5 * (lo + hi);
    try {
      const ListView v = search.enumerate(all, cfg.depth_cap, mid);
      lo = mid;
      best_list = v.list;
      best_count = v.count;
    } catch (const ListOverflow&) {
      hi = mid;
    }
  }
  RashomonSet out = finish(*best_list, best_count, rows.size(), cfg, opt);
  out.truncated = true;
  out.effective_epsilon = lo - opt;
  return out;
}

std::pair<SparseTree, Objective> find_optimal(const BinaryDataset& data,
                                              std::span<const RowIndex> rows,
                                              const EnumConfig& cfg) {
  EnumConfig exact = cfg;
  exact.epsilon = 0.0;
  const RashomonSet set = enumerate_rashomon(data, rows, exact);
  return {set.trees.front().tree, set.trees.front().objective};
}

}  // namespace rashomon
