#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rashomon/errors.hpp"
#include "rashomon/experiment.hpp"
#include "test_support.hpp"

namespace rashomon {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rashomon_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// results.csv text with the wall_ms column blanked.
std::string mask_wall_ms(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::string out;
  while (std::getline(in, line)) {
    out += line.substr(0, line.rfind(',')) + "\n";
  }
  return out;
}

RunConfig small_run(const fs::path& out) {
  RunConfig c;
  c.dataset = testing::data_path("monk1.csv");
  c.strategies = {Strategy::Unreal, Strategy::Passive};
  c.budget = 3;
  c.n_replications = 2;
  c.base_seed = 10;
  c.forest_trees = 10;
  c.output_dir = out;
  return c;
}

int run_cli(const std::string& args, const fs::path& stderr_file = {}) {
  std::string cmd = std::string(RASHOMON_CLI_PATH) + " " + args + " > /dev/null";
  cmd += stderr_file.empty() ? " 2>/dev/null" : " 2> " + stderr_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(RunConfigTest, Validation) {
  RunConfig c = small_run("x");
  EXPECT_NO_THROW(c.validate());
  c.epsilon = -1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_run("x");
  c.strategies.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_run("x");
  c.n_replications = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_run("x");
  c.noise_flip_prob = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(RunConfigTest, CanonicalJsonIgnoresOutputAndJobs) {
  RunConfig a = small_run("one");
  RunConfig b = small_run("two");
  b.jobs = 4;
  EXPECT_EQ(a.canonical_json(), b.canonical_json());
  b.epsilon = 0.05;
  EXPECT_NE(a.canonical_json(), b.canonical_json());
}

TEST(Experiment, WritesExpectedRows) {
  const auto dir = fresh_dir("rows");
  const auto outcome = run_experiment(small_run(dir));
  // 2 strategies x 2 replications x (baseline + 3 queries).
  EXPECT_EQ(outcome.rows_written, 16U);
  EXPECT_TRUE(outcome.failures.empty());
  const auto rows = read_results(outcome.results_csv);
  ASSERT_EQ(rows.size(), 16U);
  EXPECT_EQ(slurp(outcome.results_csv).substr(0, std::string(kResultsHeader).size()), kResultsHeader);
  for (const auto& r : rows) {
    EXPECT_EQ(r.seed, 10 + r.replication);
    EXPECT_EQ(r.train_size, 19 + r.iteration);
    EXPECT_EQ(r.chosen_row.has_value(), r.iteration > 0);
    EXPECT_EQ(r.selector_score.has_value(), r.iteration > 0 && r.strategy == "unreal");
    EXPECT_TRUE(r.n_trees.has_value());
  }
  EXPECT_TRUE(fs::exists(outcome.summary_json));
  EXPECT_TRUE(fs::exists(outcome.manifest_json));
}

TEST(Experiment, SingleStrategyBudgetThree) {
  const auto dir = fresh_dir("single");
  auto cfg = small_run(dir);
  cfg.strategies = {Strategy::Unreal};
  EXPECT_EQ(run_experiment(cfg).rows_written, 8U);
}

TEST(Experiment, RerunIsIdenticalIgnoringWallClock) {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  auto ca = small_run(a);
  auto cb = small_run(b);
  ca.strategies = cb.strategies = {Strategy::Unreal, Strategy::Dureal, Strategy::RfQbc, Strategy::Passive};
  cb.jobs = 2;
  run_experiment(ca);
  run_experiment(cb);
  EXPECT_EQ(mask_wall_ms(slurp(a / "results.csv")), mask_wall_ms(slurp(b / "results.csv")));
  EXPECT_EQ(slurp(a / "manifest.json"), slurp(b / "manifest.json"));
  // Same directory, same configuration: allowed and identical.
  run_experiment(ca);
  EXPECT_EQ(mask_wall_ms(slurp(a / "results.csv")), mask_wall_ms(slurp(b / "results.csv")));
}

TEST(Experiment, RefusesDifferentConfigInSameDirectory) {
  const auto dir = fresh_dir("refuse");
  auto cfg = small_run(dir);
  run_experiment(cfg);
  cfg.epsilon = 0.05;
  EXPECT_THROW(run_experiment(cfg), ConfigError);
}

TEST(Experiment, MissingDatasetIsParseError) {
  auto cfg = small_run(fresh_dir("missing"));
  cfg.dataset = "/nonexistent/data.csv";
  EXPECT_THROW(run_experiment(cfg), ParseError);
}

TEST(Results, FormatAndReadRoundTrip) {
  const auto dir = fresh_dir("roundtrip");
  fs::create_directories(dir);
  ResultRow r;
  r.replication = 1;
  r.seed = 11;
  r.iteration = 2;
  r.strategy = "dureal";
  r.train_size = 21;
  r.chosen_row = 42;
  r.selector_score = 0.5;
  r.test_f1 = 0.75;
  r.test_error = 0.25;
  r.n_trees = 30;
  r.n_unique_patterns = 4;
  r.truncated = true;
  r.wall_ms = 1.5;
  {
    std::ofstream out(dir / "results.csv");
    out << kResultsHeader << "\n" << format_result_row(r) << "\n";
  }
  const auto back = read_results(dir / "results.csv");
  ASSERT_EQ(back.size(), 1U);
  EXPECT_EQ(format_result_row(back[0]), format_result_row(r));
  {
    std::ofstream out(dir / "results.csv");
    out << "wrong,header\n";
  }
  EXPECT_THROW(read_results(dir / "results.csv"), ParseError);
}

TEST(Plotdata, WritesCurvesAndLogCounts) {
  const auto dir = fresh_dir("plot");
  auto cfg = small_run(dir);
  cfg.strategies = {Strategy::Unreal, Strategy::RfQbc, Strategy::Passive};
  run_experiment(cfg);
  const auto report = emit_plotdata(dir);
  EXPECT_TRUE(fs::exists(dir / "plotdata" / "learning_curves.csv"));
  EXPECT_TRUE(fs::exists(dir / "plotdata" / "relative_curves.csv"));
  ASSERT_TRUE(fs::exists(dir / "plotdata" / "counts.csv"));
  std::istringstream in(slurp(dir / "plotdata" / "counts.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "dataset,strategy,iteration,mean_n_trees,mean_n_unique,log_n_trees,log_n_unique");
  int n = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> c;
    std::stringstream ls(line);
    for (std::string f; std::getline(ls, f, ',');) c.push_back(f);
    ASSERT_EQ(c.size(), 7U);
    EXPECT_EQ(c[0], "monk1");
    EXPECT_NEAR(std::stod(c[5]), std::log(std::stod(c[3])), 1e-6);
    EXPECT_NEAR(std::stod(c[6]), std::log(std::stod(c[4])), 1e-6);
    EXPECT_LE(std::stod(c[4]), std::stod(c[3]));
    ++n;
  }
  EXPECT_GT(n, 0);
  bool warned_dureal = false;
  for (const auto& w : report.warnings) warned_dureal |= w.find("dureal") != std::string::npos;
  EXPECT_TRUE(warned_dureal);
}

TEST(Stats, PairwiseTableHasUnitDiagonal) {
  const auto dir = fresh_dir("stats");
  auto cfg = small_run(dir);
  cfg.n_replications = 3;
  cfg.strategies = {Strategy::Unreal, Strategy::Passive};
  run_experiment(cfg);
  const auto t = pairwise_wilcoxon(dir);
  ASSERT_EQ(t.strategies.size(), 2U);
  EXPECT_DOUBLE_EQ(t.p[0][0], 1.0);
  EXPECT_DOUBLE_EQ(t.p[1][1], 1.0);
  const auto text = format_pairwise_table(t);
  EXPECT_NE(text.find("monk1"), std::string::npos);
}

TEST(SweepCsv, WritesHeaderAndRows) {
  const auto dir = fresh_dir("sweep");
  fs::create_directories(dir);
  SweepResult s;
  s.rows.push_back(SweepRow{0.01, 3, 2, 0.2, 0.8, false});
  write_sweep_csv(s, dir / "sweep.csv");
  const auto text = slurp(dir / "sweep.csv");
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "epsilon,n_trees,n_unique_patterns,ensemble_test_error,mean_member_accuracy,truncated");
}

TEST(Cli, ExitCodes) {
  const auto dir = fresh_dir("cli");
  fs::create_directories(dir);
  const std::string data = testing::data_path("monk1.csv");
  EXPECT_EQ(run_cli("enumerate --dataset " + data + " --epsilon 0.01 --depth-cap 2"), 0);
  EXPECT_EQ(run_cli("run --dataset " + data + " --strategy unreal --budget 2 --out " + (dir / "a").string()), 0);
  EXPECT_EQ(run_cli("stats --results " + (dir / "a").string()), 0);
  EXPECT_EQ(run_cli("emit-plotdata --results " + (dir / "a").string()), 0);
  EXPECT_EQ(run_cli("sweep-threshold --dataset " + data + " --grid 0,0.01,0.02 --depth-cap 2 --out " +
                    (dir / "a").string()),
            0);

  const auto err = dir / "stderr.txt";
  EXPECT_EQ(run_cli("run --dataset " + data + " --strategy bogus --out " + (dir / "b").string(), err), 2);
  EXPECT_NE(slurp(err).find("\"kind\""), std::string::npos);
  EXPECT_EQ(run_cli("run --dataset " + data + " --strategy unreal --budget 2 --epsilon 0.05 --out " +
                        (dir / "a").string(),
                    err),
            2);
  EXPECT_EQ(run_cli("enumerate --dataset /nonexistent.csv"), 2);
  EXPECT_EQ(run_cli("--no-such-flag"), 2);
}

}  // namespace
}  // namespace rashomon
