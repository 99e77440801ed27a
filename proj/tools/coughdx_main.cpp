// Command-line front end: feature extraction, strategy evaluation,
// cross-dataset runs, hyper-parameter tuning and manifest combination.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/dataset/feature_matrix.hpp"
#include "coughdx/dataset/manifest.hpp"
#include "coughdx/eval/folds.hpp"
#include "coughdx/harness/strategy.hpp"
#include "coughdx/tuning/bayesopt.hpp"

namespace {

using namespace coughdx;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write " + path);
  out << text << '\n';
  require(out.good(), ErrorCode::io, "write failed for " + path);
}

Classifier parse_classifier(const std::string& name) {
  if (name == "dndt") return Classifier::dndt;
  if (name == "dndf") return Classifier::dndf;
  raise(ErrorCode::config, "classifier must be dndt or dndf");
}

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct EvaluateArgs {
  std::string features, report;
  int strategy = 5;
  std::string classifier = "dndf";
  int folds = 10;
  std::uint64_t seed = 0;
  bool paper_protocol = false;
  int bo_budget = 30;
  int bo_inner_folds = 10;
  int rfecv_step = 1;
  int rfecv_folds = 5;
  int rfecv_trees = 100;
  int depth_max = 16;
  int trees_max = 50;
  int epochs_max = 50;
};

// A depth-16, 50-tree trial holds hundreds of millions of parameters, so
// the search-space caps are exposed for machines that cannot carry it.
void add_space_caps(CLI::App* cmd, EvaluateArgs& a) {
  cmd->add_option("--depth-max", a.depth_max, "tuning bound on tree depth")
      ->check(CLI::Range(1, 16));
  cmd->add_option("--trees-max", a.trees_max, "tuning bound on forest size");
  cmd->add_option("--epochs-max", a.epochs_max, "tuning bound on epochs");
}

RunOptions make_options(const EvaluateArgs& a) {
  RunOptions opt;
  opt.outer_folds = a.folds;
  opt.paper_protocol = a.paper_protocol;
  opt.bo_budget = a.bo_budget;
  opt.bo_inner_folds = a.bo_inner_folds;
  opt.rfecv.step = a.rfecv_step;
  opt.rfecv.folds = a.rfecv_folds;
  opt.rfecv.trees.n_estimators = a.rfecv_trees;
  opt.space.depth_max = a.depth_max;
  opt.space.depth_min = std::min(opt.space.depth_min, a.depth_max);
  opt.space.trees_max = a.trees_max;
  opt.space.trees_min = std::min(opt.space.trees_min, a.trees_max);
  opt.space.epochs_max = a.epochs_max;
  opt.space.epochs_min = std::min(opt.space.epochs_min, a.epochs_max);
  return opt;
}

int run(int argc, char** argv) {
  CLI::App app{"COVID-19 cough classification toolkit"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract features for a manifest");
  std::string ex_manifest, ex_out;
  extract->add_option("--manifest", ex_manifest, "manifest CSV")->required();
  extract->add_option("--out", ex_out, "output feature CSV")->required();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate a training strategy");
  EvaluateArgs ev;
  evaluate->add_option("--features", ev.features, "feature CSV")->required();
  evaluate->add_option("--strategy", ev.strategy, "strategy 1..5")
      ->check(CLI::Range(1, 5));
  evaluate->add_option("--classifier", ev.classifier, "dndt or dndf");
  evaluate->add_option("--folds", ev.folds, "outer folds");
  evaluate->add_option("--seed", ev.seed, "seed");
  evaluate->add_option("--report", ev.report, "report JSON path")->required();
  evaluate->add_flag("--paper-protocol", ev.paper_protocol,
                     "RFECV/BO once per dataset instead of per fold (leaky)");
  bool ev_combined = false;
  evaluate->add_flag("--combined-protocol", ev_combined,
                     "combined-dataset protocol: BO + SMOTE + threshold "
                     "moving, no RFECV (ignores --strategy)");
  evaluate->add_option("--bo-budget", ev.bo_budget, "BO trials per tuning run");
  evaluate->add_option("--bo-inner-folds", ev.bo_inner_folds,
                       "inner CV folds for the BO objective");
  evaluate->add_option("--rfecv-step", ev.rfecv_step, "features removed per step");
  evaluate->add_option("--rfecv-folds", ev.rfecv_folds, "RFECV CV folds");
  evaluate->add_option("--rfecv-trees", ev.rfecv_trees, "RFECV forest size");
  add_space_caps(evaluate, ev);

  // cross
  auto* cross = app.add_subcommand("cross", "Train on one dataset, test on another");
  std::string cr_train, cr_test, cr_report, cr_classifier = "dndf";
  std::uint64_t cr_seed = 0;
  int cr_budget = 30, cr_inner = 10;
  cross->add_option("--train", cr_train, "training feature CSV")->required();
  cross->add_option("--test", cr_test, "test feature CSV")->required();
  cross->add_option("--seed", cr_seed, "seed");
  cross->add_option("--report", cr_report, "report JSON path")->required();
  cross->add_option("--classifier", cr_classifier, "dndt or dndf");
  cross->add_option("--bo-budget", cr_budget, "BO trials");
  cross->add_option("--bo-inner-folds", cr_inner, "inner CV folds");
  EvaluateArgs cr_caps;
  add_space_caps(cross, cr_caps);

  // tune
  auto* tune = app.add_subcommand("tune", "Bayesian hyper-parameter search");
  std::string tu_features, tu_log, tu_classifier = "dndf";
  int tu_budget = 30, tu_inner = 10;
  std::uint64_t tu_seed = 0;
  tune->add_option("--features", tu_features, "feature CSV")->required();
  tune->add_option("--budget", tu_budget, "number of trials");
  tune->add_option("--trials-log", tu_log, "JSON-lines trial log")->required();
  tune->add_option("--seed", tu_seed, "seed");
  tune->add_option("--classifier", tu_classifier, "dndt or dndf");
  tune->add_option("--inner-folds", tu_inner, "CV folds for the objective");
  EvaluateArgs tu_caps;
  add_space_caps(tune, tu_caps);

  // combine
  auto* combine = app.add_subcommand("combine", "Merge manifests into one");
  std::string cb_manifests, cb_out;
  combine->add_option("--manifests", cb_manifests, "comma-separated manifest CSVs")
      ->required();
  combine->add_option("--out", cb_out, "combined manifest CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*extract) {
      const auto manifest = load_manifest(ex_manifest);
      materialize(manifest, ex_out);
      std::cout << "wrote " << manifest.size() << " feature rows to " << ex_out
                << "\n";
    } else if (*evaluate) {
      const FeatureMatrix fm = load_feature_csv(ev.features);
      RunReport report;
      if (ev_combined) {
        const StrategyConfig cfg = StrategyConfig::no_rfecv_variant(
            parse_classifier(ev.classifier), ev.seed);
        report = run_combined(fm, cfg, make_options(ev));
        std::cout << "combined protocol "
                  << classifier_name(cfg.classifier) << ": pooled AUC "
                  << report.pooled.roc_auc << ", accuracy "
                  << report.pooled.accuracy << "\n";
      } else {
        const StrategyConfig cfg = StrategyConfig::make(
            ev.strategy, parse_classifier(ev.classifier), ev.seed);
        report = run_strategy(fm, cfg, make_options(ev));
        std::cout << "strategy " << ev.strategy << " "
                  << classifier_name(cfg.classifier) << ": pooled AUC "
                  << report.pooled.roc_auc << ", accuracy "
                  << report.pooled.accuracy << "\n";
      }
      write_text(ev.report, report_to_json(report));
    } else if (*cross) {
      const FeatureMatrix train = load_feature_csv(cr_train);
      const FeatureMatrix test = load_feature_csv(cr_test);
      const StrategyConfig cfg = StrategyConfig::no_rfecv_variant(
          parse_classifier(cr_classifier), cr_seed);
      EvaluateArgs merged = cr_caps;
      merged.bo_budget = cr_budget;
      merged.bo_inner_folds = cr_inner;
      const RunOptions opt = make_options(merged);
      const RunReport report = run_cross_dataset(train, test, cfg, opt);
      write_text(cr_report, report_to_json(report));
      std::cout << "cross-dataset AUC " << report.pooled.roc_auc << "\n";
    } else if (*tune) {
      const FeatureMatrix fm = load_feature_csv(tu_features);
      const Classifier classifier = parse_classifier(tu_classifier);
      SearchSpace space = make_options(tu_caps).space;
      if (classifier == Classifier::dndt) space.tune_num_trees = false;
      const auto objective = [&fm, tu_inner, tu_seed](const HyperParams& hp) {
        // Mean stratified CV ROC-AUC over the whole feature matrix.
        const FoldPlan plan =
            stratified_kfold(fm.labels, tu_inner, derive_seed(tu_seed, 11));
        double auc_sum = 0.0;
        for (int f = 0; f < tu_inner; ++f) {
          const auto train_rows = plan.train_rows(f);
          const auto test_rows = plan.test_rows(f);
          const Matrix x_train = fm.x.take_rows(train_rows);
          const Matrix x_test = fm.x.take_rows(test_rows);
          std::vector<int> y_train, y_test;
          for (auto r : train_rows) y_train.push_back(fm.labels[r]);
          for (auto r : test_rows) y_test.push_back(fm.labels[r]);
          ForestModel model =
              init_forest(hp, static_cast<int>(x_train.cols),
                          derive_seed(tu_seed, 12, static_cast<std::uint64_t>(f)));
          train_forest(model, x_train, y_train, hp,
                       derive_seed(tu_seed, 13, static_cast<std::uint64_t>(f)));
          auc_sum += roc_auc(y_test, forest_predict_proba(model, x_test));
        }
        return auc_sum / tu_inner;
      };
      const OptimizeResult result = optimize(space, objective, tu_budget, tu_seed);
      std::ofstream log(tu_log);
      require(log.good(), ErrorCode::io, "cannot write " + tu_log);
      for (const TrialRecord& t : result.trials) {
        log << trial_to_json(t) << '\n';
      }
      std::cout << "best score " << result.best_score << " with num_trees "
                << result.best.num_trees << ", depth " << result.best.depth
                << ", features_rate " << result.best.features_rate
                << ", batch_size " << result.best.batch_size << ", num_epochs "
                << result.best.num_epochs << "\n";
    } else if (*combine) {
      std::vector<std::vector<SampleRecord>> manifests;
      for (const auto& path : split_list(cb_manifests)) {
        manifests.push_back(load_manifest(path));
      }
      const auto combined = build_combined(manifests);
      write_manifest(cb_out, combined);
      std::cout << "wrote " << combined.size() << " records to " << cb_out << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::config || e.code() == ErrorCode::argument
               ? kExitConfig
               : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
