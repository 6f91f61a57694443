#include "rashomon/active_loop.hpp"

#include <algorithm>
#include <chrono>

#include "rashomon/analysis.hpp"
#include "rashomon/errors.hpp"
#include "rashomon/random.hpp"

namespace rashomon {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Unreal: return "unreal";
    case Strategy::Dureal: return "dureal";
    case Strategy::RfQbc: return "rf_qbc";
    case Strategy::Passive: return "passive";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "unreal") return Strategy::Unreal;
  if (name == "dureal") return Strategy::Dureal;
  if (name == "rf_qbc") return Strategy::RfQbc;
  if (name == "passive") return Strategy::Passive;
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "' (expected unreal, dureal, rf_qbc or passive)");
}

std::string_view to_string(EvalModel m) {
  switch (m) {
    case EvalModel::RashomonAll: return "rashomon_all";
    case EvalModel::RashomonUnique: return "rashomon_unique";
    case EvalModel::Forest: return "forest";
  }
  return "unknown";
}

EvalModel parse_eval_model(std::string_view name) {
  if (name == "rashomon_all") return EvalModel::RashomonAll;
  if (name == "rashomon_unique") return EvalModel::RashomonUnique;
  if (name == "forest") return EvalModel::Forest;
  throw ConfigError("unknown evaluation model '" + std::string(name) +
                    "' (expected rashomon_all, rashomon_unique or forest)");
}

ALState ALState::from_split(const SplitIndices& split) {
  ALState s;
  s.train = split.train;
  s.candidate = split.candidate;
  s.test = split.test;
  return s;
}

namespace {

EvalModel eval_model_for(Strategy strategy, const LoopConfig& cfg) {
  switch (strategy) {
    case Strategy::Unreal:
    case Strategy::Dureal: return cfg.rashomon_eval;
    case Strategy::RfQbc: return EvalModel::Forest;
    case Strategy::Passive: return cfg.passive_eval;
  }
  return EvalModel::RashomonAll;
}

bool needs_rashomon(Strategy strategy, const LoopConfig& cfg) {
  return strategy == Strategy::Unreal || strategy == Strategy::Dureal ||
         eval_model_for(strategy, cfg) != EvalModel::Forest;
}

bool needs_forest(Strategy strategy, const LoopConfig& cfg) {
  return strategy == Strategy::RfQbc || eval_model_for(strategy, cfg) == EvalModel::Forest;
}

}  // namespace

Fit fit_state(Strategy strategy, const ALState& state, const BinaryDataset& data,
              const LoopConfig& cfg) {
  Fit fit;
  if (needs_rashomon(strategy, cfg)) {
    fit.rashomon = enumerate_rashomon(data, state.train, cfg.enumeration);
    fit.patterns = group_patterns(*fit.rashomon, FeatureView(data, state.candidate));
  }
  if (needs_forest(strategy, cfg)) {
    ForestConfig fc = cfg.forest;
    fc.seed = derive_seed(cfg.forest.seed ^ cfg.seed, state.iteration);
    fit.forest = train_forest(data, state.train, fc);
  }
  return fit;
}

Committee selection_committee(Strategy strategy, const Fit& fit) {
  switch (strategy) {
    case Strategy::Unreal:
      return Committee(unique_representatives(fit.patterns, *fit.rashomon));
    case Strategy::Dureal: {
      std::vector<double> weights;
      weights.reserve(fit.patterns.size());
      for (const auto& p : fit.patterns) weights.push_back(static_cast<double>(p.multiplicity()));
      return Committee(unique_representatives(fit.patterns, *fit.rashomon), std::move(weights));
    }
    case Strategy::RfQbc:
      return *fit.forest;
    case Strategy::Passive:
      break;
  }
  throw ContractViolation("passive selection has no committee");
}

std::vector<double> score_candidates(const Committee& committee, const FeatureView& candidates,
                                     std::size_t n_classes) {
  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    scores[i] = vote_entropy(committee, candidates.row(i), n_classes);
  }
  return scores;
}

Selection select_by_entropy(const Committee& committee, const FeatureView& candidates,
                            std::size_t n_classes) {
  if (candidates.size() == 0) throw ContractViolation("no candidates to select from");
  constexpr double kTie = 1e-12;
  const auto scores = score_candidates(committee, candidates, n_classes);
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const bool higher = scores[i] > scores[best] + kTie;
    const bool tie_lower_index = std::abs(scores[i] - scores[best]) <= kTie &&
                                 candidates.row_index(i) < candidates.row_index(best);
    if (higher || tie_lower_index) best = i;
  }
  return Selection{candidates.row_index(best), scores[best]};
}

Selection select_passive(const FeatureView& candidates, std::uint64_t seed,
                         std::size_t iteration) {
  if (candidates.size() == 0) throw ContractViolation("no candidates to select from");
  Rng rng(derive_seed(seed, iteration));
  return Selection{candidates.row_index(uniform_below(rng, candidates.size())), std::nullopt};
}

TestMetrics evaluate_fit(Strategy strategy, const Fit& fit, const ALState& state,
                         const BinaryDataset& data, const LoopConfig& cfg) {
  const std::size_t n_classes = data.n_classes();
  std::vector<ClassId> predicted(state.test.size());
  switch (eval_model_for(strategy, cfg)) {
    case EvalModel::RashomonAll: {
      std::vector<double> tally(state.test.size() * n_classes, 0.0);
      for (const auto& member : fit.rashomon->trees) {
        for (std::size_t i = 0; i < state.test.size(); ++i) {
          const ClassId y = member.tree.predict_unchecked(data.row(state.test[i]));
          tally[i * n_classes + static_cast<std::size_t>(y)] += 1.0;
        }
      }
      for (std::size_t i = 0; i < state.test.size(); ++i) {
        predicted[i] = tally_argmax(std::span<const double>(tally).subspan(i * n_classes, n_classes));
      }
      break;
    }
    case EvalModel::RashomonUnique: {
      const Committee c(unique_representatives(fit.patterns, *fit.rashomon));
      for (std::size_t i = 0; i < state.test.size(); ++i) {
        predicted[i] = ensemble_predict(c, data.row(state.test[i]), n_classes);
      }
      break;
    }
    case EvalModel::Forest: {
      for (std::size_t i = 0; i < state.test.size(); ++i) {
        predicted[i] = ensemble_predict(*fit.forest, data.row(state.test[i]), n_classes);
      }
      break;
    }
  }
  std::vector<ClassId> actual;
  actual.reserve(state.test.size());
  for (const auto r : state.test) actual.push_back(data.label(r));
  return TestMetrics{f1_score(predicted, actual, n_classes), error_rate(predicted, actual)};
}

namespace {

void fill_counts(QueryRecord& rec, const Fit& fit) {
  if (fit.rashomon) {
    rec.n_trees = fit.rashomon->size();
    rec.n_unique_patterns = fit.patterns.size();
    rec.truncated = fit.rashomon->truncated;
  }
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

StepResult step(Strategy strategy, const ALState& state, const Fit& current,
                const BinaryDataset& data, const LoopConfig& cfg) {
  if (state.candidate.empty()) throw ContractViolation("candidate pool is empty");
  const auto start = std::chrono::steady_clock::now();

  const FeatureView pool(data, state.candidate);
  const Selection chosen =
      strategy == Strategy::Passive
          ? select_passive(pool, cfg.seed, state.iteration)
          : select_by_entropy(selection_committee(strategy, current), pool, data.n_classes());

  StepResult out;
  out.state.train = state.train;
  out.state.train.insert(
      std::lower_bound(out.state.train.begin(), out.state.train.end(), chosen.row), chosen.row);
  out.state.candidate = state.candidate;
  out.state.candidate.erase(
      std::find(out.state.candidate.begin(), out.state.candidate.end(), chosen.row));
  out.state.test = state.test;
  out.state.iteration = state.iteration + 1;
  out.state.history = state.history;

  out.fit = fit_state(strategy, out.state, data, cfg);
  const TestMetrics m = evaluate_fit(strategy, out.fit, out.state, data, cfg);

  QueryRecord& rec = out.record;
  rec.iteration = out.state.iteration;
  rec.train_size = out.state.train.size();
  rec.chosen_row = chosen.row;
  rec.selector_score = chosen.score;
  rec.test_f1 = m.f1;
  rec.test_error = m.error;
  fill_counts(rec, out.fit);
  rec.wall_ms = elapsed_ms(start);
  out.state.history.push_back(rec);
  return out;
}

namespace {

std::pair<ALState, QueryRecord> fit_and_step(Strategy strategy, const ALState& state,
                                             const BinaryDataset& data, const LoopConfig& cfg) {
  const Fit current = fit_state(strategy, state, data, cfg);
  StepResult r = step(strategy, state, current, data, cfg);
  return {std::move(r.state), std::move(r.record)};
}

}  // namespace

std::pair<ALState, QueryRecord> step_unreal(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg) {
  return fit_and_step(Strategy::Unreal, state, data, cfg);
}

std::pair<ALState, QueryRecord> step_dureal(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg) {
  return fit_and_step(Strategy::Dureal, state, data, cfg);
}

std::pair<ALState, QueryRecord> step_rf_qbc(const ALState& state, const BinaryDataset& data,
                                            const LoopConfig& cfg) {
  return fit_and_step(Strategy::RfQbc, state, data, cfg);
}

std::pair<ALState, QueryRecord> step_passive(const ALState& state, const BinaryDataset& data,
                                             const LoopConfig& cfg) {
  return fit_and_step(Strategy::Passive, state, data, cfg);
}

std::vector<QueryRecord> run(Strategy strategy, const BinaryDataset& data,
                             const SplitIndices& split, std::size_t budget,
                             const LoopConfig& cfg) {
  if (budget > split.candidate.size()) {
    throw ConfigError("budget " + std::to_string(budget) + " exceeds candidate pool of " +
                      std::to_string(split.candidate.size()));
  }
  const auto start = std::chrono::steady_clock::now();
  ALState state = ALState::from_split(split);
  Fit fit = fit_state(strategy, state, data, cfg);
  const TestMetrics m = evaluate_fit(strategy, fit, state, data, cfg);

  std::vector<QueryRecord> records;
  records.reserve(budget + 1);
  QueryRecord base;
  base.train_size = state.train.size();
  base.test_f1 = m.f1;
  base.test_error = m.error;
  fill_counts(base, fit);
  base.wall_ms = elapsed_ms(start);
  records.push_back(base);

  for (std::size_t n = 0; n < budget; ++n) {
    StepResult r = step(strategy, state, fit, data, cfg);
    r.state.history.clear();
    records.push_back(r.record);
    state = std::move(r.state);
    fit = std::move(r.fit);
  }
  return records;
}

}  // namespace rashomon
