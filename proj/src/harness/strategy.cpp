#include "coughdx/harness/strategy.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/eval/folds.hpp"
#include "coughdx/smote/smote.hpp"

namespace coughdx {

namespace {

// Seed stream tags for the stages of one run.
enum SeedTag : std::uint64_t {
  kTagOuterFolds = 1,
  kTagRfecv = 2,
  kTagBo = 3,
  kTagSmote = 4,
  kTagTrainInit = 5,
  kTagTrainLoop = 6,
  kTagObjective = 7,
};

std::vector<int> subset_labels(const std::vector<int>& y,
                               const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(y[r]);
  return out;
}

std::vector<int> all_features(std::size_t n) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

void observe(const RunOptions& opt, const std::string& stage,
             const std::vector<std::size_t>& rows) {
  if (opt.stage_observer) opt.stage_observer(stage, rows);
}

// SMOTE with the neighbour count clamped to what the minority class can
// support; returns the input unchanged when balancing is impossible.
void smote_train_set(Matrix& x, std::vector<int>& y, int k,
                     std::uint64_t seed) {
  std::size_t c1 = 0;
  for (int v : y) c1 += static_cast<std::size_t>(v);
  const std::size_t minority = std::min(c1, y.size() - c1);
  if (minority < 2 || c1 * 2 == y.size()) return;
  const int k_eff = std::min<int>(k, static_cast<int>(minority) - 1);
  ResampledSet rs = smote_resample(x, y, k_eff, seed);
  x = std::move(rs.x);
  y = std::move(rs.labels);
}

struct InnerFold {
  Matrix x_train, x_test;
  std::vector<int> y_train, y_test;
};

// Mean inner-CV ROC-AUC objective for Bayesian tuning. The inner fold plan
// and all per-fold seeds are fixed across trials so trials are paired.
std::function<double(const HyperParams&)> make_cv_objective(
    const Matrix& x, const std::vector<int>& y, int inner_folds, bool use_smote,
    int smote_k, std::uint64_t seed) {
  std::size_t c1 = 0;
  for (int v : y) c1 += static_cast<std::size_t>(v);
  const int min_class = static_cast<int>(std::min(c1, y.size() - c1));
  const int k = std::max(2, std::min(inner_folds, min_class));
  require(min_class >= 2, ErrorCode::argument,
          "too few samples of one class for inner cross-validation");

  const FoldPlan plan = stratified_kfold(y, k, derive_seed(seed, 1));
  auto folds = std::make_shared<std::vector<InnerFold>>();
  for (int f = 0; f < k; ++f) {
    InnerFold fold;
    const auto train_rows = plan.train_rows(f);
    const auto test_rows = plan.test_rows(f);
    fold.x_train = x.take_rows(train_rows);
    fold.x_test = x.take_rows(test_rows);
    fold.y_train = subset_labels(y, train_rows);
    fold.y_test = subset_labels(y, test_rows);
    folds->push_back(std::move(fold));
  }

  return [folds, k, use_smote, smote_k, seed](const HyperParams& hp) {
    hp.validate();
    double auc_sum = 0.0;
    for (int f = 0; f < k; ++f) {
      const InnerFold& fold = (*folds)[static_cast<std::size_t>(f)];
      Matrix x_fit = fold.x_train;
      std::vector<int> y_fit = fold.y_train;
      if (use_smote) {
        smote_train_set(x_fit, y_fit, smote_k,
                        derive_seed(seed, 2, static_cast<std::uint64_t>(f)));
      }
      ForestModel model =
          init_forest(hp, static_cast<int>(x_fit.cols),
                      derive_seed(seed, 3, static_cast<std::uint64_t>(f)));
      train_forest(model, x_fit, y_fit, hp,
                   derive_seed(seed, 4, static_cast<std::uint64_t>(f)));
      const std::vector<double> scores =
          forest_predict_proba(model, fold.x_test);
      auc_sum += roc_auc(fold.y_test, scores);
    }
    return auc_sum / k;
  };
}

struct TrainedFold {
  ForestModel model;
  std::vector<int> selected;
  HyperParams hp;
  double threshold = 0.5;
  FoldSeeds seeds;
};

HyperParams effective_default_hp(const StrategyConfig& cfg,
                                 const RunOptions& opt) {
  HyperParams hp = opt.default_hp.value_or(HyperParams{});
  if (cfg.classifier == Classifier::dndt) hp.num_trees = 1;
  return hp;
}

SearchSpace effective_space(const StrategyConfig& cfg, const RunOptions& opt) {
  SearchSpace space = opt.space;
  if (cfg.classifier == Classifier::dndt) space.tune_num_trees = false;
  return space;
}

// The per-training-fold pipeline shared by every entry point.
TrainedFold train_pipeline(const FeatureMatrix& fm,
                           const std::vector<std::size_t>& train_rows,
                           const StrategyConfig& cfg, const RunOptions& opt,
                           std::uint64_t fold_seed,
                           const std::vector<int>* fixed_selection,
                           const HyperParams* fixed_hp) {
  TrainedFold out;
  out.seeds.fold_seed = fold_seed;
  out.seeds.rfecv = derive_seed(fold_seed, kTagRfecv);
  out.seeds.bo = derive_seed(fold_seed, kTagBo);
  out.seeds.smote = derive_seed(fold_seed, kTagSmote);
  out.seeds.train_init = derive_seed(fold_seed, kTagTrainInit);
  out.seeds.train_loop = derive_seed(fold_seed, kTagTrainLoop);
  const std::vector<int> y_train = subset_labels(fm.labels, train_rows);

  if (fixed_selection != nullptr) {
    out.selected = *fixed_selection;
  } else if (cfg.use_rfecv) {
    observe(opt, "rfecv", train_rows);
    RfecvOptions ropt = opt.rfecv;
    ropt.seed = out.seeds.rfecv;
    const Matrix x_train_full = fm.x.take_rows(train_rows);
    out.selected = rfecv(x_train_full, y_train, ropt).selected;
  } else {
    out.selected = all_features(fm.x.cols);
  }

  const Matrix x_train = fm.x.take(train_rows, out.selected);

  if (fixed_hp != nullptr) {
    out.hp = *fixed_hp;
  } else if (cfg.hp_source == HpSource::bayesian) {
    observe(opt, "bo", train_rows);
    const auto objective = make_cv_objective(
        x_train, y_train, opt.bo_inner_folds, cfg.use_smote, opt.smote_k,
        derive_seed(fold_seed, kTagObjective));
    out.hp = optimize(effective_space(cfg, opt), objective, opt.bo_budget,
                      out.seeds.bo)
                 .best;
    if (cfg.classifier == Classifier::dndt) out.hp.num_trees = 1;
  } else {
    out.hp = effective_default_hp(cfg, opt);
  }

  Matrix x_fit = x_train;
  std::vector<int> y_fit = y_train;
  if (cfg.use_smote) {
    observe(opt, "smote", train_rows);
    smote_train_set(x_fit, y_fit, opt.smote_k, out.seeds.smote);
  }

  observe(opt, "train", train_rows);
  out.model =
      init_forest(out.hp, static_cast<int>(x_fit.cols), out.seeds.train_init);
  train_forest(out.model, x_fit, y_fit, out.hp, out.seeds.train_loop);

  if (cfg.use_threshold_moving) {
    observe(opt, "threshold", train_rows);
    const std::vector<double> train_scores =
        forest_predict_proba(out.model, x_train);
    out.threshold = select_threshold(y_train, train_scores);
  } else {
    out.threshold = 0.5;
  }
  return out;
}

std::vector<std::string> dataset_list(const FeatureMatrix& fm) {
  std::vector<std::string> list;
  std::unordered_set<std::string> seen;
  for (const auto& g : fm.groups) {
    if (seen.insert(g).second) list.push_back(g);
  }
  return list;
}

EvalMetrics mean_of_fold_metrics(const std::vector<FoldResult>& folds) {
  EvalMetrics mean;
  if (folds.empty()) return mean;
  for (const FoldResult& f : folds) {
    mean.accuracy += f.metrics.accuracy;
    mean.precision += f.metrics.precision;
    mean.recall += f.metrics.recall;
    mean.specificity += f.metrics.specificity;
    mean.f1 += f.metrics.f1;
    mean.roc_auc += f.metrics.roc_auc;
    mean.degenerate = mean.degenerate || f.metrics.degenerate;
  }
  const double n = static_cast<double>(folds.size());
  mean.accuracy /= n;
  mean.precision /= n;
  mean.recall /= n;
  mean.specificity /= n;
  mean.f1 /= n;
  mean.roc_auc /= n;
  return mean;
}

RunReport run_folds(const FeatureMatrix& fm, const StrategyConfig& cfg,
                    const RunOptions& opt) {
  require(fm.n_rows() > 0, ErrorCode::argument, "empty feature matrix");
  const FoldPlan plan = stratified_kfold(
      fm.labels, opt.outer_folds, derive_seed(cfg.seed, kTagOuterFolds));

  // The leaky reference variant selects features and tunes once, on all rows.
  std::optional<std::vector<int>> global_selection;
  std::optional<HyperParams> global_hp;
  if (opt.paper_protocol) {
    std::vector<std::size_t> all_rows(fm.n_rows());
    std::iota(all_rows.begin(), all_rows.end(), 0);
    const std::uint64_t global_seed = derive_seed(cfg.seed, 0x91);
    if (cfg.use_rfecv) {
      RfecvOptions ropt = opt.rfecv;
      ropt.seed = derive_seed(global_seed, kTagRfecv);
      global_selection = rfecv(fm.x, fm.labels, ropt).selected;
    }
    if (cfg.hp_source == HpSource::bayesian) {
      const Matrix x_sel = global_selection
                               ? fm.x.take_cols(*global_selection)
                               : fm.x;
      const auto objective = make_cv_objective(
          x_sel, fm.labels, opt.bo_inner_folds, cfg.use_smote, opt.smote_k,
          derive_seed(global_seed, kTagObjective));
      HyperParams hp = optimize(effective_space(cfg, opt), objective,
                                opt.bo_budget, derive_seed(global_seed, kTagBo))
                           .best;
      if (cfg.classifier == Classifier::dndt) hp.num_trees = 1;
      global_hp = hp;
    }
  }

  RunReport report;
  report.cfg = cfg;
  report.datasets = dataset_list(fm);
  report.outer_folds = opt.outer_folds;
  report.paper_protocol = opt.paper_protocol;

  std::vector<int> pooled_true, pooled_pred;
  std::vector<double> pooled_scores;

  for (int f = 0; f < opt.outer_folds; ++f) {
    const std::uint64_t fold_seed =
        derive_seed(cfg.seed, 0xf01d, static_cast<std::uint64_t>(f));
    const auto train_rows = plan.train_rows(f);
    const auto test_rows = plan.test_rows(f);

    const TrainedFold trained = train_pipeline(
        fm, train_rows, cfg, opt, fold_seed,
        global_selection ? &*global_selection : nullptr,
        global_hp ? &*global_hp : nullptr);

    const Matrix x_test = fm.x.take(test_rows, trained.selected);
    const std::vector<double> scores =
        forest_predict_proba(trained.model, x_test);
    const std::vector<int> y_test = subset_labels(fm.labels, test_rows);
    std::vector<int> y_pred(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      y_pred[i] = scores[i] >= trained.threshold ? 1 : 0;
    }

    FoldResult fr;
    fr.fold = f;
    fr.cm = confusion(y_test, y_pred);
    fr.metrics = compute_metrics(fr.cm, scores, y_test);
    fr.metrics.threshold = trained.threshold;
    fr.threshold = trained.threshold;
    fr.selected_features = trained.selected;
    fr.hp = trained.hp;
    fr.seeds = trained.seeds;
    report.folds.push_back(std::move(fr));

    pooled_true.insert(pooled_true.end(), y_test.begin(), y_test.end());
    pooled_pred.insert(pooled_pred.end(), y_pred.begin(), y_pred.end());
    pooled_scores.insert(pooled_scores.end(), scores.begin(), scores.end());
  }

  report.pooled_cm = confusion(pooled_true, pooled_pred);
  report.pooled = compute_metrics(report.pooled_cm, pooled_scores, pooled_true);
  report.fold_mean = mean_of_fold_metrics(report.folds);
  return report;
}

}  // namespace

const char* classifier_name(Classifier c) {
  return c == Classifier::dndt ? "dndt" : "dndf";
}

StrategyConfig StrategyConfig::make(int strategy, Classifier classifier,
                                    std::uint64_t seed) {
  require(strategy >= 1 && strategy <= 5, ErrorCode::config,
          "strategy must be in 1..5");
  StrategyConfig cfg;
  cfg.strategy = strategy;
  cfg.classifier = classifier;
  cfg.seed = seed;
  cfg.use_rfecv = strategy >= 3;
  cfg.hp_source = strategy >= 4 ? HpSource::bayesian : HpSource::stock_defaults;
  cfg.use_smote = strategy >= 5;
  cfg.use_threshold_moving = strategy >= 2;
  return cfg;
}

StrategyConfig StrategyConfig::no_rfecv_variant(Classifier classifier,
                                                std::uint64_t seed) {
  StrategyConfig cfg = make(5, classifier, seed);
  cfg.use_rfecv = false;
  return cfg;
}

void StrategyConfig::validate_strategy_flags() const {
  const StrategyConfig expect = make(strategy, classifier, seed);
  require(use_rfecv == expect.use_rfecv && hp_source == expect.hp_source &&
              use_smote == expect.use_smote &&
              use_threshold_moving == expect.use_threshold_moving,
          ErrorCode::config,
          "flags do not match strategy " + std::to_string(strategy));
}

RunReport run_strategy(const FeatureMatrix& features, const StrategyConfig& cfg,
                       const RunOptions& opt) {
  cfg.validate_strategy_flags();
  return run_folds(features, cfg, opt);
}

RunReport run_cross_dataset(const FeatureMatrix& train,
                            const FeatureMatrix& test,
                            const StrategyConfig& cfg, const RunOptions& opt) {
  require(cfg.strategy == 5 && !cfg.use_rfecv &&
              cfg.hp_source == HpSource::bayesian && cfg.use_smote &&
              cfg.use_threshold_moving,
          ErrorCode::config,
          "cross-dataset runs require the no-RFECV strategy-5 variant");

  std::unordered_set<std::string> train_ids(train.clip_ids.begin(),
                                            train.clip_ids.end());
  for (const auto& id : test.clip_ids) {
    require(train_ids.find(id) == train_ids.end(), ErrorCode::leakage,
            "clip_id '" + id + "' appears in both train and test");
  }

  std::vector<std::size_t> train_rows(train.n_rows());
  std::iota(train_rows.begin(), train_rows.end(), 0);
  const std::uint64_t fold_seed = derive_seed(cfg.seed, 0xcd5);
  const TrainedFold trained =
      train_pipeline(train, train_rows, cfg, opt, fold_seed, nullptr, nullptr);

  const Matrix x_test = test.x.take_cols(trained.selected);
  const std::vector<double> scores = forest_predict_proba(trained.model, x_test);
  std::vector<int> y_pred(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    y_pred[i] = scores[i] >= trained.threshold ? 1 : 0;
  }

  RunReport report;
  report.cfg = cfg;
  report.datasets = dataset_list(train);
  const auto test_sets = dataset_list(test);
  report.datasets.insert(report.datasets.end(), test_sets.begin(),
                         test_sets.end());
  report.outer_folds = 0;
  report.paper_protocol = false;
  report.pooled_cm = confusion(test.labels, y_pred);
  report.pooled = compute_metrics(report.pooled_cm, scores, test.labels);
  report.pooled.threshold = trained.threshold;

  FoldResult fr;
  fr.fold = 0;
  fr.cm = report.pooled_cm;
  fr.metrics = report.pooled;
  fr.threshold = trained.threshold;
  fr.selected_features = trained.selected;
  fr.hp = trained.hp;
  fr.seeds = trained.seeds;
  report.folds.push_back(std::move(fr));
  report.fold_mean = report.pooled;
  return report;
}

RunReport run_combined(const FeatureMatrix& features, const StrategyConfig& cfg,
                       const RunOptions& opt) {
  require(!cfg.use_rfecv, ErrorCode::config,
          "the combined-dataset protocol does not use RFECV");
  require(cfg.hp_source == HpSource::bayesian && cfg.use_smote &&
              cfg.use_threshold_moving,
          ErrorCode::config,
          "combined-dataset runs require BO + SMOTE + threshold moving");
  return run_folds(features, cfg, opt);
}

std::string report_to_json(const RunReport& report) {
  using nlohmann::json;
  auto metrics_json = [](const EvalMetrics& m) {
    return json{{"accuracy", m.accuracy},       {"precision", m.precision},
                {"recall", m.recall},           {"specificity", m.specificity},
                {"f1", m.f1},                   {"roc_auc", m.roc_auc},
                {"threshold", m.threshold},     {"degenerate", m.degenerate}};
  };
  auto cm_json = [](const ConfusionMatrix& cm) {
    return json{{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
  };
  auto hp_json = [](const HyperParams& hp) {
    return json{{"num_trees", hp.num_trees},
                {"depth", hp.depth},
                {"features_rate", hp.features_rate},
                {"learning_rate", hp.learning_rate},
                {"batch_size", hp.batch_size},
                {"num_epochs", hp.num_epochs}};
  };

  json j;
  j["tool"] = "coughdx";
  j["report_version"] = 1;
  j["datasets"] = report.datasets;
  j["config"] = {
      {"strategy", report.cfg.strategy},
      {"classifier", classifier_name(report.cfg.classifier)},
      {"use_rfecv", report.cfg.use_rfecv},
      {"hp_source",
       report.cfg.hp_source == HpSource::bayesian ? "bayesian" : "default"},
      {"use_smote", report.cfg.use_smote},
      {"use_threshold_moving", report.cfg.use_threshold_moving},
      {"seed", report.cfg.seed},
      {"outer_folds", report.outer_folds},
      {"paper_protocol", report.paper_protocol}};
  j["pooled"] = {{"confusion", cm_json(report.pooled_cm)},
                 {"metrics", metrics_json(report.pooled)}};
  j["fold_mean"] = metrics_json(report.fold_mean);
  json folds = json::array();
  for (const FoldResult& f : report.folds) {
    folds.push_back(json{{"fold", f.fold},
                         {"confusion", cm_json(f.cm)},
                         {"metrics", metrics_json(f.metrics)},
                         {"threshold", f.threshold},
                         {"selected_features", f.selected_features},
                         {"hyperparams", hp_json(f.hp)},
                         {"seeds",
                          json{{"fold_seed", f.seeds.fold_seed},
                               {"rfecv", f.seeds.rfecv},
                               {"bo", f.seeds.bo},
                               {"smote", f.seeds.smote},
                               {"train_init", f.seeds.train_init},
                               {"train_loop", f.seeds.train_loop}}}});
  }
  j["folds"] = std::move(folds);
  return j.dump(2);
}

}  // namespace coughdx
