#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coughdx/dataset/feature_matrix.hpp"
#include "coughdx/ensemble/rfecv.hpp"
#include "coughdx/eval/metrics.hpp"
#include "coughdx/tuning/bayesopt.hpp"

namespace coughdx {

enum class Classifier { dndt, dndf };

enum class HpSource { stock_defaults, bayesian };

// Flags of the five training strategies:
//   S1: classifier only            S2: + threshold moving
//   S3: + RFECV                    S4: + Bayesian optimization
//   S5: + SMOTE
struct StrategyConfig {
  int strategy = 1;
  Classifier classifier = Classifier::dndf;
  bool use_rfecv = false;
  HpSource hp_source = HpSource::stock_defaults;
  bool use_smote = false;
  bool use_threshold_moving = false;
  std::uint64_t seed = 0;

  static StrategyConfig make(int strategy, Classifier classifier,
                             std::uint64_t seed);
  // Strategy-5 variant without feature selection, used for the
  // cross-dataset and combined-dataset protocols.
  static StrategyConfig no_rfecv_variant(Classifier classifier,
                                         std::uint64_t seed);

  // Raises a config error unless the flags match the named strategy exactly.
  void validate_strategy_flags() const;
};

struct RunOptions {
  int outer_folds = 10;
  // Run RFECV/BO once on the full dataset instead of per training fold.
  // This leaks test information and exists only for comparison.
  bool paper_protocol = false;
  int bo_budget = 30;
  int bo_inner_folds = 10;
  RfecvOptions rfecv{};
  int smote_k = 5;
  SearchSpace space{};
  // Overrides the stock default hyper-parameters when hp_source is default.
  std::optional<HyperParams> default_hp;
  // Provenance hook: invoked with the global row indices entering each
  // train-only stage ("rfecv", "bo", "smote", "threshold", "train").
  std::function<void(const std::string&, const std::vector<std::size_t>&)>
      stage_observer;
};

// Seeds of every stochastic stage of one fold, all derived from the run
// seed; echoing them makes a report self-describing.
struct FoldSeeds {
  std::uint64_t fold_seed = 0;
  std::uint64_t rfecv = 0;
  std::uint64_t bo = 0;
  std::uint64_t smote = 0;
  std::uint64_t train_init = 0;
  std::uint64_t train_loop = 0;
};

struct FoldResult {
  int fold = 0;
  ConfusionMatrix cm;
  EvalMetrics metrics;
  double threshold = 0.5;
  std::vector<int> selected_features;  // empty means all
  HyperParams hp;
  FoldSeeds seeds;
};

struct RunReport {
  StrategyConfig cfg;
  std::vector<std::string> datasets;
  int outer_folds = 0;
  bool paper_protocol = false;
  ConfusionMatrix pooled_cm;
  EvalMetrics pooled;     // from pooled confusion counts and pooled scores
  EvalMetrics fold_mean;  // arithmetic mean of per-fold metrics
  std::vector<FoldResult> folds;
};

// Stratified outer cross-validation of one strategy: per training fold,
// optional RFECV, optional Bayesian tuning (inner CV), optional SMOTE, model
// training, optional threshold selection on the fold's own training scores,
// then evaluation of the held-out fold. Folds are pooled into one confusion
// matrix; per-fold and fold-mean metrics are reported alongside.
RunReport run_strategy(const FeatureMatrix& features, const StrategyConfig& cfg,
                       const RunOptions& opt = {});

// Tune and train on the full training dataset, evaluate once on the test
// dataset. Requires the no-RFECV strategy-5 variant; overlapping clip_ids
// raise a leakage error.
RunReport run_cross_dataset(const FeatureMatrix& train,
                            const FeatureMatrix& test,
                            const StrategyConfig& cfg,
                            const RunOptions& opt = {});

// Stratified evaluation of the combined dataset with BO + SMOTE + threshold
// moving and no RFECV; a config requesting RFECV is rejected.
RunReport run_combined(const FeatureMatrix& features, const StrategyConfig& cfg,
                       const RunOptions& opt = {});

std::string report_to_json(const RunReport& report);

const char* classifier_name(Classifier c);

}  // namespace coughdx
