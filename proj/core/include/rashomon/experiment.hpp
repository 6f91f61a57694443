#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rashomon/active_loop.hpp"
#include "rashomon/analysis.hpp"

namespace rashomon {

struct RunConfig {
  std::filesystem::path dataset;
  std::vector<Strategy> strategies{Strategy::Unreal};
  double epsilon = 0.03;
  double lambda = 0.01;
  int depth_cap = 3;
  std::size_t max_trees = 200000;
  /// Queries per replication; unset means the whole candidate pool.
  std::optional<std::size_t> budget;
  std::size_t n_replications = 1;
  std::uint64_t base_seed = 0;
  double test_frac = 0.2;
  double init_train_frac = 0.2;
  double noise_flip_prob = 0.0;
  /// Subsample the file to this many rows per replication (0 keeps all).
  std::size_t subsample = 0;
  std::size_t forest_trees = 100;
  int forest_max_depth = 8;
  EvalModel passive_eval = EvalModel::RashomonAll;
  EvalModel rashomon_eval = EvalModel::RashomonAll;
  std::filesystem::path output_dir = "results";
  std::size_t jobs = 1;

  void validate() const;
  /// Deterministic JSON text of every field that affects results (not
  /// output_dir or jobs).
  std::string canonical_json() const;
};

struct ReplicationFailure {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::string strategy;
  std::string message;
};

struct ExperimentOutcome {
  std::filesystem::path results_csv;
  std::filesystem::path summary_json;
  std::filesystem::path manifest_json;
  std::size_t rows_written = 0;
  std::vector<ReplicationFailure> failures;
};

inline constexpr const char* kResultsHeader =
    "replication,seed,iteration,strategy,train_size,chosen_row,selector_score,test_f1,"
    "test_error,n_trees,n_unique_patterns,truncated_flag,wall_ms";

/// Runs every strategy on replications base_seed + r and writes
/// results.csv, summary.json and manifest.json into cfg.output_dir. Refuses
/// (ConfigError) when the directory already holds a manifest for a different
/// configuration; rerunning the same configuration rewrites identical
/// results. A failing replication is recorded and the rest continue.
ExperimentOutcome run_experiment(const RunConfig& cfg);

/// One parsed results.csv row.
struct ResultRow {
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::string strategy;
  std::size_t train_size = 0;
  std::optional<RowIndex> chosen_row;
  std::optional<double> selector_score;
  double test_f1 = 0.0;
  double test_error = 0.0;
  std::optional<std::size_t> n_trees;
  std::optional<std::size_t> n_unique_patterns;
  bool truncated = false;
  double wall_ms = 0.0;
};

std::string format_result_row(const ResultRow& row);
std::vector<ResultRow> read_results(const std::filesystem::path& results_csv);

struct PlotdataReport {
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
};

/// Writes tidy CSVs for plotting under <results_dir>/plotdata/.
PlotdataReport emit_plotdata(const std::filesystem::path& results_dir);

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path);

struct PairwiseTable {
  std::string dataset;
  std::vector<std::string> strategies;
  /// Lower-triangular p-values; p[i][j] for j <= i, NaN where undefined.
  std::vector<std::vector<double>> p;
};

/// Two-sided Wilcoxon p-values between every pair of strategies, pairing
/// test_error over (replication, iteration) cells.
PairwiseTable pairwise_wilcoxon(const std::filesystem::path& results_dir);

std::string format_pairwise_table(const PairwiseTable& table);

}  // namespace rashomon
