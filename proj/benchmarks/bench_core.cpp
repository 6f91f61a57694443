#include <benchmark/benchmark.h>

#include <string>

#include "rashomon/active_loop.hpp"
#include "rashomon/enumerator.hpp"
#include "rashomon/patterns.hpp"

namespace {

using namespace rashomon;

const BinaryDataset& monk1() {
  static const BinaryDataset data = load_csv(std::string(RASHOMON_DATA_DIR) + "/monk1.csv");
  return data;
}

// Arg: epsilon in thousandths.
void BM_EnumerateMonk1Split(benchmark::State& state) {
  const auto& data = monk1();
  const auto sp = split(data, 0.2, 0.2, 0);
  EnumConfig cfg;
  cfg.epsilon = static_cast<double>(state.range(0)) / 1000.0;
  std::size_t n = 0;
  for (auto _ : state) {
    const auto set = enumerate_rashomon(data, sp.train, cfg);
    n = set.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["trees"] = static_cast<double>(n);
}
BENCHMARK(BM_EnumerateMonk1Split)->Arg(10)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_EnumerateMonk1Full(benchmark::State& state) {
  const auto& data = monk1();
  std::vector<RowIndex> rows(data.n_rows());
  for (RowIndex r = 0; r < rows.size(); ++r) rows[r] = r;
  EnumConfig cfg;
  cfg.epsilon = 0.03;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_rashomon(data, rows, cfg).size());
}
BENCHMARK(BM_EnumerateMonk1Full)->Unit(benchmark::kMillisecond);

void BM_GroupPatterns(benchmark::State& state) {
  const auto& data = monk1();
  const auto sp = split(data, 0.2, 0.2, 0);
  EnumConfig cfg;
  cfg.epsilon = 0.03;
  const auto set = enumerate_rashomon(data, sp.train, cfg);
  const FeatureView pool(data, sp.candidate);
  for (auto _ : state) benchmark::DoNotOptimize(group_patterns(set, pool).size());
  state.counters["trees"] = static_cast<double>(set.size());
}
BENCHMARK(BM_GroupPatterns)->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const auto strategy = static_cast<Strategy>(state.range(0));
  const auto& data = monk1();
  const auto sp = split(data, 0.2, 0.2, 0);
  LoopConfig cfg;
  cfg.enumeration.epsilon = 0.03;
  const ALState s0 = ALState::from_split(sp);
  const Fit fit = fit_state(strategy, s0, data, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(step(strategy, s0, fit, data, cfg).record.chosen_row);
  state.SetLabel(std::string(to_string(strategy)));
}
BENCHMARK(BM_Step)
    ->Arg(static_cast<int>(Strategy::Unreal))
    ->Arg(static_cast<int>(Strategy::Dureal))
    ->Arg(static_cast<int>(Strategy::RfQbc))
    ->Arg(static_cast<int>(Strategy::Passive))
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
