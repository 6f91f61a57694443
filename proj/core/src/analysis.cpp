#include "rashomon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rashomon/committee.hpp"
#include "rashomon/errors.hpp"
#include "rashomon/patterns.hpp"

namespace rashomon {

namespace {

void check_pair(std::span<const ClassId> predicted, std::span<const ClassId> actual) {
  if (predicted.size() != actual.size()) {
    throw ContractViolation("prediction and label vectors differ in length");
  }
  if (predicted.empty()) throw ContractViolation("metrics need at least one example");
}

double class_f1(std::span<const ClassId> predicted, std::span<const ClassId> actual,
                ClassId positive) {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] == positive;
    const bool a = actual[i] == positive;
    tp += static_cast<std::size_t>(p && a);
    fp += static_cast<std::size_t>(p && !a);
    fn += static_cast<std::size_t>(!p && a);
  }
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
}

}  // namespace

double f1_score(std::span<const ClassId> predicted, std::span<const ClassId> actual,
                std::size_t n_classes) {
  check_pair(predicted, actual);
  if (n_classes <= 2) return class_f1(predicted, actual, 1);
  double sum = 0.0;
  for (std::size_t c = 0; c < n_classes; ++c) {
    sum += class_f1(predicted, actual, static_cast<ClassId>(c));
  }
  return sum / static_cast<double>(n_classes);
}

double error_rate(std::span<const ClassId> predicted, std::span<const ClassId> actual) {
  check_pair(predicted, actual);
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) wrong += predicted[i] != actual[i];
  return static_cast<double>(wrong) / static_cast<double>(predicted.size());
}

SweepResult sweep_threshold(const BinaryDataset& data, const SplitIndices& split,
                            const SweepConfig& cfg) {
  if (cfg.epsilon_grid.empty()) throw ConfigError("epsilon grid is empty");
  if (!std::is_sorted(cfg.epsilon_grid.begin(), cfg.epsilon_grid.end())) {
    throw ConfigError("epsilon grid must ascend");
  }
  EnumConfig ec;
  ec.lambda = cfg.lambda;
  ec.depth_cap = cfg.depth_cap;
  ec.max_trees = cfg.max_trees;
  ec.epsilon = cfg.epsilon_grid.back();
  const RashomonSet full = enumerate_rashomon(data, split.train, ec);
  const double optimum = full.optimal.regularized;

  std::vector<ClassId> actual;
  for (const auto r : split.test) actual.push_back(data.label(r));
  const FeatureView candidates(data, split.candidate);

  // Test accuracy of each member, computed once.
  std::vector<double> member_accuracy(full.size());
  for (std::size_t t = 0; t < full.size(); ++t) {
    const auto pred = predict_rows(full.trees[t].tree, data, split.test);
    member_accuracy[t] = 1.0 - error_rate(pred, actual);
  }

  SweepResult out;
  double best_error = 2.0;
  double best_accuracy = -1.0;
  for (const double eps : cfg.epsilon_grid) {
    RashomonSet subset;
    subset.optimal = full.optimal;
    subset.epsilon = eps;
    subset.effective_epsilon = std::min(eps, full.effective_epsilon);
    subset.truncated = full.truncated && eps > full.effective_epsilon + kObjectiveTolerance;
    double accuracy_sum = 0.0;
    for (std::size_t t = 0; t < full.size(); ++t) {
      if (!within_threshold(full.trees[t].objective.regularized, optimum + eps)) break;
      subset.trees.push_back(full.trees[t]);
      accuracy_sum += member_accuracy[t];
    }
    SweepRow row;
    row.epsilon = eps;
    row.truncated = subset.truncated;
    row.n_trees = subset.size();
    const auto groups = group_patterns(subset, candidates);
    row.n_unique_patterns = groups.size();
    const Committee ensemble(unique_representatives(groups, subset));
    std::vector<ClassId> predicted;
    predicted.reserve(split.test.size());
    for (const auto r : split.test) {
      predicted.push_back(ensemble_predict(ensemble, data.row(r), data.n_classes()));
    }
    row.ensemble_test_error = error_rate(predicted, actual);
    row.mean_member_accuracy = accuracy_sum / static_cast<double>(subset.size());
    if (row.ensemble_test_error < best_error) {
      best_error = row.ensemble_test_error;
      out.best_epsilon = eps;
    }
    if (row.mean_member_accuracy > best_accuracy) {
      best_accuracy = row.mean_member_accuracy;
      out.best_epsilon_by_member_accuracy = eps;
    }
    out.rows.push_back(row);
  }
  return out;
}

namespace {

struct SignedRanks {
  /// Doubled mid-ranks, so tied groups stay integral.
  std::vector<long long> rank2;
  std::vector<bool> positive;
  /// Sizes of tied groups.
  std::vector<std::size_t> ties;
};

SignedRanks rank_differences(std::span<const double> d) {
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });
  SignedRanks out;
  out.rank2.assign(n, 0);
  out.positive.assign(n, false);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    const double base = std::abs(d[order[i]]);
    while (j < n && std::abs(d[order[j]]) - base <= 1e-12 * std::max(1.0, base)) ++j;
    // Ranks i+1..j share mid-rank (i+1+j)/2.
    const auto r2 = static_cast<long long>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out.rank2[order[k]] = r2;
    out.ties.push_back(j - i);
    i = j;
  }
  for (std::size_t k = 0; k < n; ++k) out.positive[k] = d[k] > 0.0;
  return out;
}

long long positive_rank2(const SignedRanks& r) {
  long long w = 0;
  for (std::size_t k = 0; k < r.rank2.size(); ++k) {
    if (r.positive[k]) w += r.rank2[k];
  }
  return w;
}

void require_nonzero(std::span<const double> d) {
  if (d.empty()) throw ContractViolation("Wilcoxon test needs at least one nonzero difference");
  for (const double x : d) {
    if (x == 0.0 || !std::isfinite(x)) {
      throw ContractViolation("Wilcoxon differences must be finite and nonzero");
    }
  }
}

}  // namespace

double wilcoxon_exact_p(std::span<const double> differences, Alternative alternative) {
  require_nonzero(differences);
  if (differences.size() > 30) throw ContractViolation("exact Wilcoxon limited to n <= 30");
  const SignedRanks r = rank_differences(differences);
  const long long total = std::accumulate(r.rank2.begin(), r.rank2.end(), 0LL);
  // counts[s] = number of sign assignments with doubled positive-rank sum s.
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  long long reach = 0;
  for (const long long rk : r.rank2) {
    for (long long s = reach; s >= 0; --s) {
      counts[static_cast<std::size_t>(s + rk)] += counts[static_cast<std::size_t>(s)];
    }
    reach += rk;
  }
  const double all = std::ldexp(1.0, static_cast<int>(differences.size()));
  const long long w = positive_rank2(r);
  double tail = 0.0;
  for (long long s = 0; s <= total; ++s) {
    const double c = counts[static_cast<std::size_t>(s)];
    if (c == 0.0) continue;
    bool extreme = false;
    switch (alternative) {
      case Alternative::TwoSided:
        extreme = std::llabs(2 * s - total) >= std::llabs(2 * w - total);
        break;
      case Alternative::Greater: extreme = s >= w; break;
      case Alternative::Less: extreme = s <= w; break;
    }
    if (extreme) tail += c;
  }
  return std::min(1.0, tail / all);
}

double wilcoxon_normal_p(std::span<const double> differences, Alternative alternative) {
  require_nonzero(differences);
  const SignedRanks r = rank_differences(differences);
  const auto n = static_cast<double>(differences.size());
  const double w = static_cast<double>(positive_rank2(r)) / 2.0;
  const double mean = n * (n + 1.0) / 4.0;
  double tie_term = 0.0;
  for (const auto t : r.ties) {
    const auto tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return 1.0;
  const double sd = std::sqrt(var);
  switch (alternative) {
    case Alternative::TwoSided: {
      const double z = std::max(0.0, std::abs(w - mean) - 0.5) / sd;
      return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    case Alternative::Greater: {
      const double z = (w - mean - 0.5) / sd;
      return 0.5 * std::erfc(z / std::sqrt(2.0));
    }
    case Alternative::Less: {
      const double z = (w - mean + 0.5) / sd;
      return 0.5 * std::erfc(-z / std::sqrt(2.0));
    }
  }
  return 1.0;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    Alternative alternative) {
  if (a.size() != b.size()) throw ContractViolation("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    if (x != 0.0) d.push_back(x);
  }
  WilcoxonResult out;
  out.n = d.size();
  if (d.empty()) return out;
  if (d.size() < 5) {
    throw ContractViolation("Wilcoxon test needs at least 5 nonzero differences, got " +
                            std::to_string(d.size()));
  }
  out.statistic = static_cast<double>(positive_rank2(rank_differences(d))) / 2.0;
  out.exact = d.size() <= 12;
  out.p_value = out.exact ? wilcoxon_exact_p(d, alternative) : wilcoxon_normal_p(d, alternative);
  return out;
}

std::vector<DeltaPoint> relative_error_curve(const ErrorSeries& strategy,
                                             const ErrorSeries& baseline) {
  if (strategy.size() != baseline.size() || strategy.empty()) {
    throw ContractViolation("relative curves need the same nonzero number of replications");
  }
  const std::size_t len = strategy.front().size();
  for (std::size_t r = 0; r < strategy.size(); ++r) {
    if (strategy[r].size() != len || baseline[r].size() != len) {
      throw ContractViolation("replications have mismatched iteration grids");
    }
  }
  const auto reps = static_cast<double>(strategy.size());
  std::vector<DeltaPoint> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    double mean = 0.0;
    for (std::size_t r = 0; r < strategy.size(); ++r) mean += strategy[r][i] - baseline[r][i];
    mean /= reps;
    double ss = 0.0;
    for (std::size_t r = 0; r < strategy.size(); ++r) {
      const double dev = strategy[r][i] - baseline[r][i] - mean;
      ss += dev * dev;
    }
    const double se = strategy.size() > 1 ? std::sqrt(ss / (reps - 1.0) / reps) : 0.0;
    out[i] = DeltaPoint{i, mean, se};
  }
  return out;
}

std::map<std::string, std::vector<DeltaPoint>> relative_error_curves(
    const std::map<std::string, ErrorSeries>& by_strategy, const std::string& baseline) {
  const auto base = by_strategy.find(baseline);
  if (base == by_strategy.end()) {
    throw ContractViolation("baseline strategy '" + baseline + "' has no records");
  }
  std::map<std::string, std::vector<DeltaPoint>> out;
  for (const auto& [name, series] : by_strategy) {
    out[name] = relative_error_curve(series, base->second);
  }
  return out;
}

}  // namespace rashomon
