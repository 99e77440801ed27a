#include "coughdx/ensemble/rfecv.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"
#include "coughdx/eval/folds.hpp"
#include "coughdx/eval/metrics.hpp"

namespace coughdx {

namespace {

std::vector<int> subset(const std::vector<int>& v,
                        const std::vector<std::size_t>& rows) {
  std::vector<int> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) out.push_back(v[r]);
  return out;
}

}  // namespace

FeatureSelection rfecv(const Matrix& x, const std::vector<int>& y,
                       const RfecvOptions& opt) {
  require(opt.folds >= 2, ErrorCode::argument, "folds must be >= 2");
  require(opt.step >= 1, ErrorCode::argument, "step must be >= 1");
  require(x.cols >= 1, ErrorCode::argument, "no features");

  const FoldPlan plan =
      stratified_kfold(y, opt.folds, derive_seed(opt.seed, 0x0f01d));
  struct Fold {
    std::vector<std::size_t> train, test;
    std::vector<int> y_train, y_test;
  };
  std::vector<Fold> folds(static_cast<std::size_t>(opt.folds));
  for (int f = 0; f < opt.folds; ++f) {
    auto& fold = folds[static_cast<std::size_t>(f)];
    fold.train = plan.train_rows(f);
    fold.test = plan.test_rows(f);
    fold.y_train = subset(y, fold.train);
    fold.y_test = subset(y, fold.test);
  }

  std::vector<int> current(x.cols);
  std::iota(current.begin(), current.end(), 0);

  std::vector<std::vector<int>> evaluated_sets;
  FeatureSelection result;

  while (true) {
    // Paired CV score for the current set: fold seeds do not depend on the
    // iteration, so identical data yields identical scores at every count.
    double score_sum = 0.0;
    for (int f = 0; f < opt.folds; ++f) {
      const auto& fold = folds[static_cast<std::size_t>(f)];
      ExtraTreesOptions topt = opt.trees;
      topt.seed = derive_seed(opt.seed, 0xcf, static_cast<std::uint64_t>(f));
      const Matrix x_train = x.take(fold.train, current);
      const Matrix x_test = x.take(fold.test, current);
      const ExtraTreesModel model = fit_extra_trees(x_train, fold.y_train, topt);
      const std::vector<double> scores =
          extra_trees_predict_proba(model, x_test);
      score_sum += roc_auc(fold.y_test, scores);
    }
    result.cv_scores.push_back(score_sum / opt.folds);
    result.n_features_path.push_back(static_cast<int>(current.size()));
    evaluated_sets.push_back(current);

    if (current.size() == 1) break;

    ExtraTreesOptions topt = opt.trees;
    topt.seed = derive_seed(opt.seed, 0x1a9);
    const Matrix x_full = x.take_cols(current);
    const ExtraTreesModel model = fit_extra_trees(x_full, y, topt);
    const std::vector<double> imp = feature_importances(model);

    // Drop the `step` least important features; ties drop the higher
    // original index first.
    const std::size_t n_drop = std::min(static_cast<std::size_t>(opt.step),
                                        current.size() - 1);
    std::vector<std::size_t> order(current.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&imp, &current](std::size_t a, std::size_t b) {
                if (imp[a] != imp[b]) return imp[a] < imp[b];
                return current[a] > current[b];
              });
    std::vector<char> drop(current.size(), 0);
    for (std::size_t i = 0; i < n_drop; ++i) drop[order[i]] = 1;
    std::vector<int> next;
    next.reserve(current.size() - n_drop);
    for (std::size_t i = 0; i < current.size(); ++i) {
      if (!drop[i]) next.push_back(current[i]);
    }
    current = std::move(next);
  }

  // Highest score wins; ties go to the smaller feature count (sets were
  // evaluated largest first, so a later index never loses a tie).
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.cv_scores.size(); ++i) {
    if (result.cv_scores[i] >= result.cv_scores[best]) best = i;
  }
  result.selected = evaluated_sets[best];
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

std::string feature_selection_to_json(const FeatureSelection& fs) {
  nlohmann::json j;
  j["selected"] = fs.selected;
  j["cv_scores"] = fs.cv_scores;
  return j.dump();
}

FeatureSelection feature_selection_from_json(const std::string& text) {
  FeatureSelection fs;
  try {
    const auto j = nlohmann::json::parse(text);
    fs.selected = j.at("selected").get<std::vector<int>>();
    fs.cv_scores = j.at("cv_scores").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::parse, std::string("bad feature selection JSON: ") + e.what());
  }
  return fs;
}

}  // namespace coughdx
