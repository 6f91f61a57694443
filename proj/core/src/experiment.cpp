#include "rashomon/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "rashomon/dataset.hpp"
#include "rashomon/errors.hpp"
#include "rashomon/random.hpp"

#ifndef RASHOMON_VERSION
#define RASHOMON_VERSION "dev"
#endif

namespace rashomon {

using nlohmann::json;

void RunConfig::validate() const {
  if (strategies.empty()) throw ConfigError("at least one strategy is required");
  if (!(epsilon >= 0.0)) throw ConfigError("epsilon must be >= 0");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (depth_cap < 0) throw ConfigError("depth_cap must be >= 0");
  if (max_trees < 1) throw ConfigError("max_trees must be >= 1");
  if (n_replications < 1) throw ConfigError("n_replications must be >= 1");
  if (!(test_frac > 0.0 && test_frac < 1.0)) throw ConfigError("test_frac must lie in (0, 1)");
  if (!(init_train_frac > 0.0 && init_train_frac < 1.0)) {
    throw ConfigError("init_train_frac must lie in (0, 1)");
  }
  if (!(noise_flip_prob >= 0.0 && noise_flip_prob <= 1.0)) {
    throw ConfigError("noise_flip_prob must lie in [0, 1]");
  }
  if (forest_trees < 1) throw ConfigError("forest_trees must be >= 1");
  if (forest_max_depth < 1) throw ConfigError("forest_max_depth must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  std::set<Strategy> seen;
  for (const auto s : strategies) {
    if (!seen.insert(s).second) throw ConfigError("strategy listed twice");
  }
}

std::string RunConfig::canonical_json() const {
  json j;
  j["dataset"] = dataset.generic_string();
  std::vector<std::string> names;
  for (const auto s : strategies) names.emplace_back(to_string(s));
  j["strategies"] = names;
  j["epsilon"] = epsilon;
  j["lambda"] = lambda;
  j["depth_cap"] = depth_cap;
  j["max_trees"] = max_trees;
  j["budget"] = budget ? json(*budget) : json(nullptr);
  j["n_replications"] = n_replications;
  j["base_seed"] = base_seed;
  j["test_frac"] = test_frac;
  j["init_train_frac"] = init_train_frac;
  j["noise_flip_prob"] = noise_flip_prob;
  j["subsample"] = subsample;
  j["forest_trees"] = forest_trees;
  j["forest_max_depth"] = forest_max_depth;
  j["passive_eval"] = std::string(to_string(passive_eval));
  j["rashomon_eval"] = std::string(to_string(rashomon_eval));
  return j.dump();
}

namespace {

std::string fmt_double(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + p.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + p.string() + "'");
  out << content;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

struct ReplicationOutput {
  std::vector<std::vector<ResultRow>> per_strategy;
  std::vector<ReplicationFailure> failures;
};

ReplicationOutput run_replication(const RunConfig& cfg, const BinaryDataset& full,
                                  std::size_t replication) {
  ReplicationOutput out;
  out.per_strategy.resize(cfg.strategies.size());
  const std::uint64_t seed = cfg.base_seed + replication;
  std::optional<BinaryDataset> data;
  std::optional<SplitIndices> split_idx;
  try {
    BinaryDataset d = cfg.subsample != 0 && cfg.subsample < full.n_rows()
                          ? subsample_rows(full, cfg.subsample, derive_seed(seed, 0x5AB5))
                          : full;
    if (cfg.noise_flip_prob > 0.0) {
      d = inject_label_noise(d, cfg.noise_flip_prob, derive_seed(seed, 0x0015E));
    }
    split_idx = split(d, cfg.test_frac, cfg.init_train_frac, seed);
    data.emplace(std::move(d));
  } catch (const std::exception& e) {
    for (const auto s : cfg.strategies) {
      out.failures.push_back({replication, seed, std::string(to_string(s)), e.what()});
    }
    return out;
  }

  LoopConfig loop;
  loop.enumeration.lambda = cfg.lambda;
  loop.enumeration.epsilon = cfg.epsilon;
  loop.enumeration.depth_cap = cfg.depth_cap;
  loop.enumeration.max_trees = cfg.max_trees;
  loop.forest.n_trees = cfg.forest_trees;
  loop.forest.max_depth = cfg.forest_max_depth;
  loop.rashomon_eval = cfg.rashomon_eval;
  loop.passive_eval = cfg.passive_eval;
  loop.seed = seed;
  const std::size_t budget = cfg.budget.value_or(split_idx->candidate.size());

  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    const Strategy strategy = cfg.strategies[s];
    try {
      const auto records = run(strategy, *data, *split_idx, budget, loop);
      for (const auto& rec : records) {
        ResultRow row;
        row.replication = replication;
        row.seed = seed;
        row.iteration = rec.iteration;
        row.strategy = std::string(to_string(strategy));
        row.train_size = rec.train_size;
        row.chosen_row = rec.chosen_row;
        row.selector_score = rec.selector_score;
        row.test_f1 = rec.test_f1;
        row.test_error = rec.test_error;
        row.n_trees = rec.n_trees;
        row.n_unique_patterns = rec.n_unique_patterns;
        row.truncated = rec.truncated;
        row.wall_ms = rec.wall_ms;
        out.per_strategy[s].push_back(std::move(row));
      }
    } catch (const std::exception& e) {
      out.failures.push_back({replication, seed, std::string(to_string(strategy)), e.what()});
    }
  }
  return out;
}

}  // namespace

std::string format_result_row(const ResultRow& r) {
  std::string line;
  line += std::to_string(r.replication) + ',';
  line += std::to_string(r.seed) + ',';
  line += std::to_string(r.iteration) + ',';
  line += r.strategy + ',';
  line += std::to_string(r.train_size) + ',';
  line += (r.chosen_row ? std::to_string(*r.chosen_row) : std::string()) + ',';
  line += (r.selector_score ? fmt_double(*r.selector_score, 12) : std::string()) + ',';
  line += fmt_double(r.test_f1) + ',';
  line += fmt_double(r.test_error) + ',';
  line += (r.n_trees ? std::to_string(*r.n_trees) : std::string()) + ',';
  line += (r.n_unique_patterns ? std::to_string(*r.n_unique_patterns) : std::string()) + ',';
  line += r.truncated ? "1," : "0,";
  line += fmt_double(r.wall_ms, 6);
  return line;
}

std::vector<ResultRow> read_results(const std::filesystem::path& results_csv) {
  std::istringstream in(read_file(results_csv));
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw ParseError("'" + results_csv.string() + "' does not start with the results header");
  }
  std::vector<ResultRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto c = split_line(line);
    if (c.size() != 13) {
      throw ParseError("results line " + std::to_string(line_no) + ": expected 13 cells");
    }
    try {
      ResultRow r;
      r.replication = std::stoul(c[0]);
      r.seed = std::stoull(c[1]);
      r.iteration = std::stoul(c[2]);
      r.strategy = c[3];
      r.train_size = std::stoul(c[4]);
      if (!c[5].empty()) r.chosen_row = static_cast<RowIndex>(std::stoul(c[5]));
      if (!c[6].empty()) r.selector_score = std::stod(c[6]);
      r.test_f1 = std::stod(c[7]);
      r.test_error = std::stod(c[8]);
      if (!c[9].empty()) r.n_trees = std::stoul(c[9]);
      if (!c[10].empty()) r.n_unique_patterns = std::stoul(c[10]);
      r.truncated = c[11] == "1";
      r.wall_ms = std::stod(c[12]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError("results line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return rows;
}

ExperimentOutcome run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const std::string config_json = cfg.canonical_json();
  namespace fs = std::filesystem;
  ExperimentOutcome outcome;
  outcome.results_csv = cfg.output_dir / "results.csv";
  outcome.summary_json = cfg.output_dir / "summary.json";
  outcome.manifest_json = cfg.output_dir / "manifest.json";

  if (fs::exists(outcome.manifest_json)) {
    const json existing = json::parse(read_file(outcome.manifest_json), nullptr, false);
    if (existing.is_discarded() || !existing.contains("config") ||
        existing["config"].dump() != json::parse(config_json).dump()) {
      throw ConfigError("output directory '" + cfg.output_dir.string() +
                        "' holds results for a different configuration; choose another "
                        "--out or remove it");
    }
  }

  const std::string dataset_bytes = read_file(cfg.dataset);
  const BinaryDataset full = parse_csv(dataset_bytes);

  std::vector<ReplicationOutput> outputs(cfg.n_replications);
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t r = next++; r < cfg.n_replications; r = next++) {
        outputs[r] = run_replication(cfg, full, r);
      }
    };
    const std::size_t n_threads = std::min(cfg.jobs, cfg.n_replications);
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
  }

  fs::create_directories(cfg.output_dir);
  std::string body = std::string(kResultsHeader) + "\n";
  json runs = json::array();
  for (std::size_t s = 0; s < cfg.strategies.size(); ++s) {
    for (std::size_t r = 0; r < cfg.n_replications; ++r) {
      const auto& rows = outputs[r].per_strategy[s];
      if (rows.empty()) continue;
      double f1_sum = 0.0;
      double ms_sum = 0.0;
      bool truncated = false;
      for (const auto& row : rows) {
        body += format_result_row(row);
        body += '\n';
        f1_sum += row.test_f1;
        ms_sum += row.wall_ms;
        truncated = truncated || row.truncated;
        ++outcome.rows_written;
      }
      runs.push_back({{"strategy", rows.front().strategy},
                      {"replication", r},
                      {"seed", rows.front().seed},
                      {"iterations", rows.size() - 1},
                      {"final_f1", rows.back().test_f1},
                      {"final_error", rows.back().test_error},
                      {"mean_f1", f1_sum / static_cast<double>(rows.size())},
                      {"any_truncated", truncated},
                      {"wall_ms", ms_sum}});
    }
  }
  json failures = json::array();
  for (const auto& o : outputs) {
    for (const auto& f : o.failures) {
      failures.push_back({{"replication", f.replication},
                          {"seed", f.seed},
                          {"strategy", f.strategy},
                          {"message", f.message}});
      outcome.failures.push_back(f);
    }
  }

  write_file(outcome.results_csv, body);
  write_file(outcome.summary_json, json{{"runs", runs}, {"failures", failures}}.dump(2) + "\n");
  const json manifest = {{"tool", "rashomon-al"},
                         {"version", RASHOMON_VERSION},
                         {"config", json::parse(config_json)},
                         {"dataset_name", cfg.dataset.stem().string()},
                         {"dataset_fnv1a64", fnv1a_hex(dataset_bytes)},
                         {"dataset_rows", full.n_rows()},
                         {"dataset_features", full.n_features()}};
  write_file(outcome.manifest_json, manifest.dump(2) + "\n");
  return outcome;
}

namespace {

std::string dataset_name_of(const std::filesystem::path& dir) {
  const auto manifest = dir / "manifest.json";
  if (!std::filesystem::exists(manifest)) return dir.filename().string();
  const json j = json::parse(read_file(manifest), nullptr, false);
  if (j.is_discarded() || !j.contains("dataset_name")) return dir.filename().string();
  return j["dataset_name"].get<std::string>();
}

struct Cell {
  std::vector<double> values;
  double mean() const {
    double s = 0.0;
    for (const double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double se() const {
    if (values.size() < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (const double v : values) ss += (v - m) * (v - m);
    const auto n = static_cast<double>(values.size());
    return std::sqrt(ss / (n - 1.0) / n);
  }
};

}  // namespace

PlotdataReport emit_plotdata(const std::filesystem::path& results_dir) {
  namespace fs = std::filesystem;
  const auto rows = read_results(results_dir / "results.csv");
  if (rows.empty()) throw ContractViolation("results.csv has no data rows");
  const std::string dataset = dataset_name_of(results_dir);
  const fs::path out_dir = results_dir / "plotdata";
  fs::create_directories(out_dir);
  PlotdataReport report;

  // strategy -> iteration -> values
  std::map<std::string, std::map<std::size_t, Cell>> f1;
  std::map<std::string, std::map<std::size_t, Cell>> err;
  std::map<std::string, std::map<std::size_t, Cell>> trees;
  std::map<std::string, std::map<std::size_t, Cell>> unique;
  std::map<std::string, std::map<std::size_t, std::vector<double>>> err_by_rep;
  for (const auto& r : rows) {
    f1[r.strategy][r.iteration].values.push_back(r.test_f1);
    err[r.strategy][r.iteration].values.push_back(r.test_error);
    if (r.n_trees) trees[r.strategy][r.iteration].values.push_back(static_cast<double>(*r.n_trees));
    if (r.n_unique_patterns) {
      unique[r.strategy][r.iteration].values.push_back(static_cast<double>(*r.n_unique_patterns));
    }
    auto& series = err_by_rep[r.strategy][r.replication];
    if (series.size() <= r.iteration) series.resize(r.iteration + 1, 0.0);
    series[r.iteration] = r.test_error;
  }

  for (const char* s : {"unreal", "dureal", "rf_qbc", "passive"}) {
    if (!f1.contains(s)) report.warnings.push_back(std::string("no records for strategy ") + s);
  }

  {
    std::string body = "dataset,strategy,iteration,mean_f1,se_f1,mean_error,se_error\n";
    for (const auto& [strategy, by_iter] : f1) {
      for (const auto& [iter, cell] : by_iter) {
        const Cell& e = err[strategy][iter];
        body += dataset + ',' + strategy + ',' + std::to_string(iter) + ',' +
                fmt_double(cell.mean()) + ',' + fmt_double(cell.se()) + ',' +
                fmt_double(e.mean()) + ',' + fmt_double(e.se()) + '\n';
      }
    }
    write_file(out_dir / "learning_curves.csv", body);
    report.files.push_back(out_dir / "learning_curves.csv");
  }

  {
    std::string body = "dataset,strategy,baseline,iteration,delta_error,se_delta\n";
    bool any = false;
    for (const char* baseline : {"rf_qbc", "passive"}) {
      if (!err_by_rep.contains(baseline)) continue;
      std::map<std::string, ErrorSeries> by_strategy;
      for (const auto& [strategy, reps] : err_by_rep) {
        for (const auto& [rep, series] : reps) by_strategy[strategy].push_back(series);
      }
      for (const auto& [strategy, series] : by_strategy) {
        std::vector<DeltaPoint> curve;
        try {
          curve = relative_error_curve(series, by_strategy.at(baseline));
        } catch (const ContractViolation& e) {
          report.warnings.push_back("skipping " + strategy + " relative to " + baseline + ": " +
                                    e.what());
          continue;
        }
        for (const auto& p : curve) {
          body += dataset + ',' + strategy + ',' + baseline + ',' + std::to_string(p.iteration) +
                  ',' + fmt_double(p.delta) + ',' + fmt_double(p.standard_error) + '\n';
          any = true;
        }
      }
    }
    if (any) {
      write_file(out_dir / "relative_curves.csv", body);
      report.files.push_back(out_dir / "relative_curves.csv");
    } else {
      report.warnings.push_back("no rf_qbc or passive baseline; relative curves not written");
    }
  }

  if (!trees.empty()) {
    std::string body =
        "dataset,strategy,iteration,mean_n_trees,mean_n_unique,log_n_trees,log_n_unique\n";
    for (const auto& [strategy, by_iter] : trees) {
      for (const auto& [iter, cell] : by_iter) {
        const double t = cell.mean();
        const double u = unique[strategy][iter].mean();
        body += dataset + ',' + strategy + ',' + std::to_string(iter) + ',' + fmt_double(t) + ',' +
                fmt_double(u) + ',' + fmt_double(std::log(t)) + ',' + fmt_double(std::log(u)) +
                '\n';
      }
    }
    write_file(out_dir / "counts.csv", body);
    report.files.push_back(out_dir / "counts.csv");
  }

  if (fs::exists(results_dir / "sweep.csv")) {
    std::istringstream in(read_file(results_dir / "sweep.csv"));
    std::string line;
    std::getline(in, line);
    std::string body = "epsilon,ensemble_error,n_trees,n_unique_patterns,mean_member_accuracy\n";
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c = split_line(line);
      if (c.size() < 6) throw ParseError("sweep.csv: malformed row");
      body += c[0] + ',' + c[3] + ',' + c[1] + ',' + c[2] + ',' + c[4] + '\n';
    }
    write_file(out_dir / "threshold.csv", body);
    report.files.push_back(out_dir / "threshold.csv");
  }
  return report;
}

void write_sweep_csv(const SweepResult& sweep, const std::filesystem::path& path) {
  std::string body =
      "epsilon,n_trees,n_unique_patterns,ensemble_test_error,mean_member_accuracy,truncated\n";
  for (const auto& r : sweep.rows) {
    body += fmt_double(r.epsilon) + ',' + std::to_string(r.n_trees) + ',' +
            std::to_string(r.n_unique_patterns) + ',' + fmt_double(r.ensemble_test_error) + ',' +
            fmt_double(r.mean_member_accuracy) + ',' + (r.truncated ? "1" : "0") + '\n';
  }
  write_file(path, body);
}

PairwiseTable pairwise_wilcoxon(const std::filesystem::path& results_dir) {
  const auto rows = read_results(results_dir / "results.csv");
  PairwiseTable table;
  table.dataset = dataset_name_of(results_dir);
  std::map<std::string, std::map<std::pair<std::size_t, std::size_t>, double>> cells;
  for (const auto& r : rows) {
    if (!cells.contains(r.strategy)) table.strategies.push_back(r.strategy);
    cells[r.strategy][{r.replication, r.iteration}] = r.test_error;
  }
  const std::size_t k = table.strategies.size();
  table.p.assign(k, std::vector<double>(k, std::nan("")));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const auto& a = cells[table.strategies[i]];
      const auto& b = cells[table.strategies[j]];
      std::vector<double> xa;
      std::vector<double> xb;
      for (const auto& [key, v] : a) {
        if (const auto it = b.find(key); it != b.end()) {
          xa.push_back(v);
          xb.push_back(it->second);
        }
      }
      try {
        table.p[i][j] = wilcoxon_signed_rank(xa, xb).p_value;
      } catch (const ContractViolation&) {
        table.p[i][j] = std::nan("");
      }
    }
  }
  return table;
}

std::string format_pairwise_table(const PairwiseTable& table) {
  std::string out = table.dataset + "\n";
  std::size_t width = 8;
  for (const auto& s : table.strategies) width = std::max(width, s.size() + 2);
  auto pad = [&](std::string s) {
    s.resize(std::max(s.size(), width), ' ');
    return s;
  };
  out += pad("");
  for (const auto& s : table.strategies) out += pad(s);
  out += '\n';
  for (std::size_t i = 0; i < table.strategies.size(); ++i) {
    out += pad(table.strategies[i]);
    for (std::size_t j = 0; j <= i; ++j) {
      const double p = table.p[i][j];
      char buf[32];
      if (std::isnan(p)) {
        std::snprintf(buf, sizeof buf, "NA");
      } else {
        std::snprintf(buf, sizeof buf, "%.5g", std::round(p * 1e5) / 1e5);
      }
      out += pad(buf);
    }
    out += '\n';
  }
  return out;
}

}  // namespace rashomon
