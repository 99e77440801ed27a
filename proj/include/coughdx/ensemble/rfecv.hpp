#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coughdx/core/matrix.hpp"
#include "coughdx/ensemble/extra_trees.hpp"

namespace coughdx {

struct RfecvOptions {
  int folds = 5;
  int step = 1;
  std::uint64_t seed = 0;
  ExtraTreesOptions trees{};  // trees.seed is ignored; streams derive from seed
};

struct FeatureSelection {
  std::vector<int> selected;         // ascending indices into the input
  std::vector<double> cv_scores;     // mean CV ROC-AUC per evaluated set
  std::vector<int> n_features_path;  // feature count per cv_scores entry
};

// Recursive feature elimination: score the current feature set by mean
// stratified-CV ROC-AUC of an Extra-Trees fit, drop the `step` features with
// the lowest full-data importances, repeat down to one feature, and return
// the evaluated set with the highest score (ties go to fewer features).
// The fold plan and per-fold model seeds are fixed across iterations so the
// scores of different feature counts are paired comparisons.
FeatureSelection rfecv(const Matrix& x, const std::vector<int>& y,
                       const RfecvOptions& opt);

std::string feature_selection_to_json(const FeatureSelection& fs);
FeatureSelection feature_selection_from_json(const std::string& text);

}  // namespace coughdx
