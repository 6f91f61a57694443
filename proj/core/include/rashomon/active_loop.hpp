#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rashomon/committee.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/learners.hpp"
#include "rashomon/patterns.hpp"

namespace rashomon {

enum class Strategy { Unreal, Dureal, RfQbc, Passive };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view name);

/// Model used to score the test split.
enum class EvalModel {
  /// Mode over every Rashomon tree.
  RashomonAll,
  /// Mode over one representative per classification pattern.
  RashomonUnique,
  /// Majority vote of a random forest.
  Forest,
};

std::string_view to_string(EvalModel m);
EvalModel parse_eval_model(std::string_view name);

struct QueryRecord {
  std::size_t iteration = 0;
  std::size_t train_size = 0;
  std::optional<RowIndex> chosen_row;
  /// Vote entropy of the chosen row; absent for passive selection.
  std::optional<double> selector_score;
  double test_f1 = 0.0;
  double test_error = 0.0;
  std::optional<std::size_t> n_trees;
  std::optional<std::size_t> n_unique_patterns;
  bool truncated = false;
  double wall_ms = 0.0;
};

struct ALState {
  std::vector<RowIndex> train;
  std::vector<RowIndex> candidate;
  std::vector<RowIndex> test;
  std::size_t iteration = 0;
  std::vector<QueryRecord> history;

  static ALState from_split(const SplitIndices& split);
};

struct LoopConfig {
  EnumConfig enumeration;
  ForestConfig forest;
  /// Test-time model for UNREAL and DUREAL.
  EvalModel rashomon_eval = EvalModel::RashomonAll;
  /// Test-time model for passive selection.
  EvalModel passive_eval = EvalModel::RashomonAll;
  /// Seeds passive draws and per-iteration forests.
  std::uint64_t seed = 0;
};

/// What a strategy learned from the current training rows.
struct Fit {
  std::optional<RashomonSet> rashomon;
  /// Patterns over the candidate pool at fit time.
  std::vector<ClassificationPattern> patterns;
  std::optional<Committee> forest;
};

/// Learns the strategy's model(s) on `state.train`. Only training labels are
/// read; candidate rows are seen through a FeatureView.
Fit fit_state(Strategy strategy, const ALState& state, const BinaryDataset& data,
              const LoopConfig& cfg);

/// Committee that scores candidates for a fitted strategy.
Committee selection_committee(Strategy strategy, const Fit& fit);

struct Selection {
  RowIndex row = 0;
  std::optional<double> score;
};

/// Highest vote entropy over `candidates` (ties: smallest row index).
Selection select_by_entropy(const Committee& committee, const FeatureView& candidates,
                            std::size_t n_classes);

/// Per-candidate vote entropies, in candidate order.
std::vector<double> score_candidates(const Committee& committee, const FeatureView& candidates,
                                     std::size_t n_classes);

/// Uniform draw from `candidates`, a pure function of (seed, iteration).
Selection select_passive(const FeatureView& candidates, std::uint64_t seed,
                         std::size_t iteration);

struct TestMetrics {
  double f1 = 0.0;
  double error = 0.0;
};

TestMetrics evaluate_fit(Strategy strategy, const Fit& fit, const ALState& state,
                         const BinaryDataset& data, const LoopConfig& cfg);

/// Runs one iteration: select with `current` (fitted on state.train), move
/// the row to train, refit, evaluate. Returns the new state, its record and
/// the new fit, which is the `current` fit for the next step.
struct StepResult {
  ALState state;
  QueryRecord record;
  Fit fit;
};

StepResult step(Strategy strategy, const ALState& state, const Fit& current,
                const BinaryDataset& data, const LoopConfig& cfg);

/// Convenience forms that fit the current state themselves.
std::pair<ALState, QueryRecord> step_unreal(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg);
std::pair<ALState, QueryRecord> step_dureal(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg);
std::pair<ALState, QueryRecord> step_rf_qbc(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg);
std::pair<ALState, QueryRecord> step_passive(const ALState& state, const BinaryDataset& data,
                                             const LoopConfig& cfg);

/// Iteration-0 record followed by `budget` query records.
std::vector<QueryRecord> run(Strategy strategy, const BinaryDataset& data,
                             const SplitIndices& split, std::size_t budget,
                             const LoopConfig& cfg);

}  // namespace rashomon
