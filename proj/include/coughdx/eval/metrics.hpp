#pragma once

#include <vector>

namespace coughdx {

struct ConfusionMatrix {
  long long tp = 0, fp = 0, tn = 0, fn = 0;
  long long total() const { return tp + fp + tn + fn; }
};

struct EvalMetrics {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double specificity = 0.0;
  double f1 = 0.0;
  double roc_auc = 0.0;
  double threshold = 0.5;
  bool degenerate = false;  // some denominator was zero
};

// Counts with positive = class 1.
ConfusionMatrix confusion(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred);

// The five ratio metrics from the confusion counts plus AUC from the scores.
// Zero-denominator ratios come back as 0 with the degenerate flag set.
EvalMetrics compute_metrics(const ConfusionMatrix& cm,
                            const std::vector<double>& scores,
                            const std::vector<int>& y_true);

// Probability that a random positive outranks a random negative, ties 1/2.
double roc_auc(const std::vector<int>& y_true,
               const std::vector<double>& scores);

// Sweep t over {0.100, 0.101, ..., 1.000}, classify positive when
// score >= t, and return the smallest t maximizing Youden's J = TPR - FPR.
double select_threshold(const std::vector<int>& y_true,
                        const std::vector<double>& scores);

}  // namespace coughdx
