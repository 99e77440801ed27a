#pragma once

#include <cstdint>
#include <vector>

#include "coughdx/core/matrix.hpp"

namespace coughdx {

struct ExtraTreesOptions {
  int n_estimators = 100;
  int max_features = 0;  // 0 means ceil(sqrt(n_features))
  int min_samples_split = 2;
  std::uint64_t seed = 0;
};

struct ExtraTreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double p_positive = 0.0;  // leaf payload
};

struct ExtraTree {
  std::vector<ExtraTreeNode> nodes;
  std::vector<double> importances;  // per-feature Gini decrease, normalized
};

struct ExtraTreesModel {
  std::size_t n_features = 0;
  bool fitted = false;
  ExtraTreesOptions opt;
  std::vector<ExtraTree> trees;
};

// Extremely randomized trees: every tree sees the full sample set, split
// thresholds are drawn uniformly strictly between the per-node feature min
// and max, the best of max_features random candidates by Gini decrease is
// kept, and trees grow to purity. Trees are fitted in parallel; each has its
// own seed stream so results do not depend on thread count.
ExtraTreesModel fit_extra_trees(const Matrix& x, const std::vector<int>& y,
                                const ExtraTreesOptions& opt);

// Reference implementation without the parallel tree loop.
ExtraTreesModel fit_extra_trees_serial(const Matrix& x,
                                       const std::vector<int>& y,
                                       const ExtraTreesOptions& opt);

// Positive-class probability per row (mean of leaf class fractions).
std::vector<double> extra_trees_predict_proba(const ExtraTreesModel& model,
                                              const Matrix& x);

// Mean decrease in Gini impurity per feature, averaged over trees and
// normalized to sum 1.
std::vector<double> feature_importances(const ExtraTreesModel& model);

}  // namespace coughdx
