// rashomon-al: Rashomon-set active learning experiments from the command line.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/errors.hpp"
#include "rashomon/experiment.hpp"
#include "rashomon/patterns.hpp"

namespace {

using namespace rashomon;

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("RASHOMON_AL_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "results";
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (cell.empty()) continue;
    try {
      grid.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("bad epsilon grid entry '" + cell + "'");
    }
  }
  return grid;
}

int fail(const std::string& kind, const std::string& message) {
  std::cerr << "error: " << nlohmann::json{{"kind", kind}, {"message", message}}.dump() << "\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rashomon-set query-by-committee active learning"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  run_cfg.output_dir = default_output_dir();
  std::vector<std::string> strategy_names{"unreal"};
  std::string passive_eval = "rashomon_all";
  std::string rashomon_eval = "rashomon_all";
  std::size_t budget = 0;
  bool full_budget = true;

  auto* run_cmd = app.add_subcommand("run", "Replicated active-learning experiment");
  run_cmd->add_option("--dataset", run_cfg.dataset, "Binarized CSV (label last)")
      ->required()
      ->check(CLI::ExistingFile);
  run_cmd->add_option("--strategy", strategy_names,
                      "unreal, dureal, rf_qbc, passive (comma separated or repeated)")
      ->delimiter(',');
  run_cmd->add_option("--epsilon", run_cfg.epsilon, "Rashomon threshold");
  run_cmd->add_option("--lambda", run_cfg.lambda, "Per-leaf penalty");
  run_cmd->add_option("--depth-cap", run_cfg.depth_cap, "Maximum tree depth");
  run_cmd->add_option("--max-trees", run_cfg.max_trees, "Rashomon set size cap");
  auto* budget_opt = run_cmd->add_option("--budget", budget, "Queries per run (default: all)");
  run_cmd->add_option("--replications", run_cfg.n_replications, "Number of replications");
  run_cmd->add_option("--seed", run_cfg.base_seed, "Base seed; replication r uses seed + r");
  run_cmd->add_option("--test-frac", run_cfg.test_frac, "Fraction held out for testing");
  run_cmd->add_option("--init-train-frac", run_cfg.init_train_frac,
                      "Fraction of the remainder labeled at start");
  run_cmd->add_option("--noise", run_cfg.noise_flip_prob, "Label flip probability");
  run_cmd->add_option("--subsample", run_cfg.subsample, "Rows kept per replication (0 = all)");
  run_cmd->add_option("--forest-trees", run_cfg.forest_trees, "Trees in the RF-QBC committee");
  run_cmd->add_option("--forest-depth", run_cfg.forest_max_depth, "Depth cap of forest trees");
  run_cmd->add_option("--passive-eval", passive_eval,
                      "rashomon_all, rashomon_unique or forest");
  run_cmd->add_option("--rashomon-eval", rashomon_eval, "Test model for unreal/dureal");
  run_cmd->add_option("--out", run_cfg.output_dir, "Output directory (env RASHOMON_AL_OUT)");
  run_cmd->add_option("--jobs", run_cfg.jobs, "Concurrent replications");

  std::filesystem::path enum_dataset;
  EnumConfig enum_cfg;
  std::size_t print_trees = 0;
  bool enum_on_split = false;
  double enum_test_frac = 0.2;
  double enum_init_frac = 0.2;
  std::uint64_t enum_seed = 0;
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate a Rashomon set");
  enum_cmd->add_option("--dataset", enum_dataset)->required()->check(CLI::ExistingFile);
  enum_cmd->add_option("--lambda", enum_cfg.lambda);
  enum_cmd->add_option("--epsilon", enum_cfg.epsilon);
  enum_cmd->add_option("--depth-cap", enum_cfg.depth_cap);
  enum_cmd->add_option("--max-trees", enum_cfg.max_trees);
  enum_cmd->add_option("--print-trees", print_trees, "Print the first N trees");
  enum_cmd->add_flag("--initial-split", enum_on_split,
                     "Enumerate on the initial training split instead of all rows");
  enum_cmd->add_option("--test-frac", enum_test_frac);
  enum_cmd->add_option("--init-train-frac", enum_init_frac);
  enum_cmd->add_option("--seed", enum_seed);

  std::filesystem::path sweep_dataset;
  SweepConfig sweep_cfg;
  std::string grid_text = "0,0.005,0.01,0.015,0.02,0.025,0.03,0.04,0.05";
  double sweep_test_frac = 0.2;
  double sweep_init_frac = 0.2;
  std::uint64_t sweep_seed = 0;
  double sweep_noise = 0.0;
  double sweep_slack = 0.0;
  std::filesystem::path sweep_out = default_output_dir();
  auto* sweep_cmd = app.add_subcommand("sweep-threshold", "Ensemble error across thresholds");
  sweep_cmd->add_option("--dataset", sweep_dataset)->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--lambda", sweep_cfg.lambda);
  sweep_cmd->add_option("--depth-cap", sweep_cfg.depth_cap);
  sweep_cmd->add_option("--max-trees", sweep_cfg.max_trees);
  sweep_cmd->add_option("--grid", grid_text, "Ascending comma-separated thresholds");
  sweep_cmd->add_option("--test-frac", sweep_test_frac);
  sweep_cmd->add_option("--init-train-frac", sweep_init_frac);
  sweep_cmd->add_option("--seed", sweep_seed);
  sweep_cmd->add_option("--noise", sweep_noise, "Label flip probability");
  sweep_cmd->add_option("--slack", sweep_slack, "Added to the argmin when recommending");
  sweep_cmd->add_option("--out", sweep_out);

  std::filesystem::path stats_dir = default_output_dir();
  auto* stats_cmd = app.add_subcommand("stats", "Pairwise Wilcoxon p-values");
  stats_cmd->add_option("--results", stats_dir, "Results directory")->check(CLI::ExistingDirectory);

  std::filesystem::path plot_dir = default_output_dir();
  auto* plot_cmd = app.add_subcommand("emit-plotdata", "Write plot-ready CSVs");
  plot_cmd->add_option("--results", plot_dir, "Results directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return fail("usage", e.what());
  }

  try {
    if (run_cmd->parsed()) {
      run_cfg.strategies.clear();
      for (const auto& s : strategy_names) run_cfg.strategies.push_back(parse_strategy(s));
      run_cfg.passive_eval = parse_eval_model(passive_eval);
      run_cfg.rashomon_eval = parse_eval_model(rashomon_eval);
      full_budget = budget_opt->count() == 0;
      if (!full_budget) run_cfg.budget = budget;
      const auto outcome = run_experiment(run_cfg);
      std::cout << "wrote " << outcome.rows_written << " rows to " << outcome.results_csv.string()
                << "\n";
      for (const auto& f : outcome.failures) {
        std::cerr << "replication " << f.replication << " (seed " << f.seed << ", " << f.strategy
                  << ") failed: " << f.message << "\n";
      }
      return outcome.failures.empty() ? 0 : 1;
    }
    if (enum_cmd->parsed()) {
      const BinaryDataset data = load_csv(enum_dataset);
      std::vector<RowIndex> rows;
      if (enum_on_split) {
        rows = split(data, enum_test_frac, enum_init_frac, enum_seed).train;
      } else {
        for (RowIndex r = 0; r < data.n_rows(); ++r) rows.push_back(r);
      }
      const RashomonSet set = enumerate_rashomon(data, rows, enum_cfg);
      std::cout << "rows " << rows.size() << "\n"
                << "optimal_objective " << set.optimal.regularized << "\n"
                << "optimal_misclass " << set.optimal.misclass_count << "\n"
                << "optimal_leaves " << set.optimal.n_leaves << "\n"
                << "n_trees " << set.size() << "\n"
                << "truncated " << (set.truncated ? 1 : 0) << "\n"
                << "effective_epsilon " << set.effective_epsilon << "\n";
      for (std::size_t i = 0; i < std::min(print_trees, set.size()); ++i) {
        std::cout << set.trees[i].objective.regularized << "\t" << set.trees[i].tree.to_string()
                  << "\n";
      }
      return 0;
    }
    if (sweep_cmd->parsed()) {
      BinaryDataset data = load_csv(sweep_dataset);
      if (sweep_noise > 0.0) data = inject_label_noise(data, sweep_noise, sweep_seed);
      const SplitIndices s = split(data, sweep_test_frac, sweep_init_frac, sweep_seed);
      sweep_cfg.epsilon_grid = parse_grid(grid_text);
      const SweepResult result = sweep_threshold(data, s, sweep_cfg);
      std::filesystem::create_directories(sweep_out);
      write_sweep_csv(result, sweep_out / "sweep.csv");
      std::cout << "epsilon\tn_trees\tn_unique\tensemble_error\tmean_member_accuracy\n";
      for (const auto& r : result.rows) {
        std::cout << r.epsilon << "\t" << r.n_trees << "\t" << r.n_unique_patterns << "\t"
                  << r.ensemble_test_error << "\t" << r.mean_member_accuracy
                  << (r.truncated ? "\t(truncated)" : "") << "\n";
      }
      std::cout << "best_epsilon " << result.best_epsilon << "\n"
                << "best_epsilon_by_member_accuracy " << result.best_epsilon_by_member_accuracy
                << "\n"
                << "recommended_epsilon " << result.best_epsilon + sweep_slack << "\n";
      return 0;
    }
    if (stats_cmd->parsed()) {
      std::cout << format_pairwise_table(pairwise_wilcoxon(stats_dir));
      return 0;
    }
    if (plot_cmd->parsed()) {
      const auto report = emit_plotdata(plot_dir);
      for (const auto& f : report.files) std::cout << "wrote " << f.string() << "\n";
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
  } catch (const ParseError& e) {
    return fail("parse", e.what());
  } catch (const ValidationError& e) {
    return fail("validation", e.what());
  } catch (const ConfigError& e) {
    return fail("config", e.what());
  } catch (const ContractViolation& e) {
    return fail("contract", e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
  return 0;
}
