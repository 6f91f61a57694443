#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"

namespace rashomon {

/// Binary data: F1 of class 1. Otherwise macro-averaged one-vs-rest F1, where
/// a class that is neither present nor predicted scores 1.
double f1_score(std::span<const ClassId> predicted, std::span<const ClassId> actual,
                std::size_t n_classes);

double error_rate(std::span<const ClassId> predicted, std::span<const ClassId> actual);

struct SweepRow {
  double epsilon = 0.0;
  std::size_t n_trees = 0;
  std::size_t n_unique_patterns = 0;
  double ensemble_test_error = 0.0;
  double mean_member_accuracy = 0.0;
  /// The enumeration hit max_trees below this epsilon.
  bool truncated = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  /// Grid point with the lowest ensemble test error (ties: smallest epsilon).
  double best_epsilon = 0.0;
  /// Grid point with the highest mean member accuracy (ties: smallest epsilon).
  double best_epsilon_by_member_accuracy = 0.0;
};

struct SweepConfig {
  double lambda = 0.01;
  int depth_cap = 3;
  std::size_t max_trees = 200000;
  std::vector<double> epsilon_grid;
};

/// Enumerates once at the largest grid threshold on the training split, then
/// evaluates the nested sets at every grid point on the test split. Patterns
/// are grouped on the candidate pool.
SweepResult sweep_threshold(const BinaryDataset& data, const SplitIndices& split,
                            const SweepConfig& cfg);

enum class Alternative { TwoSided, Greater, Less };

struct WilcoxonResult {
  double p_value = 1.0;
  /// Sum of ranks of positive differences a - b.
  double statistic = 0.0;
  /// Nonzero differences used.
  std::size_t n = 0;
  bool exact = false;
};

/// Paired Wilcoxon signed-rank test on a - b. Zero differences are dropped;
/// tied magnitudes get mid-ranks. Exact enumeration of sign assignments for
/// n <= 12, otherwise the normal approximation with tie and continuity
/// corrections. All-zero differences give p = 1.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    Alternative alternative = Alternative::TwoSided);

/// Branches exposed for cross-checking; `differences` must be nonzero.
double wilcoxon_exact_p(std::span<const double> differences, Alternative alternative);
double wilcoxon_normal_p(std::span<const double> differences, Alternative alternative);

struct DeltaPoint {
  std::size_t iteration = 0;
  double delta = 0.0;
  double standard_error = 0.0;
};

/// Per-replication error series: series[replication][iteration].
using ErrorSeries = std::vector<std::vector<double>>;

/// Paired per-iteration differences strategy - baseline, averaged over
/// replications, with the standard error of the mean difference.
std::vector<DeltaPoint> relative_error_curve(const ErrorSeries& strategy,
                                             const ErrorSeries& baseline);

std::map<std::string, std::vector<DeltaPoint>> relative_error_curves(
    const std::map<std::string, ErrorSeries>& by_strategy, const std::string& baseline);

}  // namespace rashomon
