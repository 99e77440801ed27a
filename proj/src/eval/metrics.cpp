#include "coughdx/eval/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "coughdx/core/error.hpp"

namespace coughdx {

ConfusionMatrix confusion(const std::vector<int>& y_true,
                          const std::vector<int>& y_pred) {
  require(y_true.size() == y_pred.size(), ErrorCode::argument,
          "label/prediction length mismatch");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1) {
      y_pred[i] == 1 ? ++cm.tp : ++cm.fn;
    } else {
      y_pred[i] == 1 ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

EvalMetrics compute_metrics(const ConfusionMatrix& cm,
                            const std::vector<double>& scores,
                            const std::vector<int>& y_true) {
  require(cm.total() > 0, ErrorCode::argument, "empty confusion matrix");

  EvalMetrics m;
  auto ratio = [&m](long long num, long long den) {
    if (den == 0) {
      m.degenerate = true;
      return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
  };
  m.accuracy = ratio(cm.tp + cm.tn, cm.total());
  m.precision = ratio(cm.tp, cm.tp + cm.fp);
  m.recall = ratio(cm.tp, cm.tp + cm.fn);
  m.specificity = ratio(cm.tn, cm.tn + cm.fp);
  if (m.precision + m.recall == 0.0) {
    m.degenerate = true;
    m.f1 = 0.0;
  } else {
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  }
  if (!scores.empty()) {
    m.roc_auc = roc_auc(y_true, scores);
  }
  return m;
}

double roc_auc(const std::vector<int>& y_true,
               const std::vector<double>& scores) {
  require(y_true.size() == scores.size(), ErrorCode::argument,
          "label/score length mismatch");
  std::size_t n_pos = 0, n_neg = 0;
  for (int y : y_true) (y == 1 ? n_pos : n_neg)++;
  require(n_pos > 0 && n_neg > 0, ErrorCode::argument,
          "AUC undefined with a single class");

  // Mann-Whitney via midranks.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() &&
           scores[order[j + 1]] == scores[order[i]]) {
      ++j;
    }
    const double midrank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) {
      if (y_true[order[t]] == 1) rank_sum_pos += midrank;
    }
    i = j + 1;
  }
  const double np = static_cast<double>(n_pos);
  const double nn = static_cast<double>(n_neg);
  return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

double select_threshold(const std::vector<int>& y_true,
                        const std::vector<double>& scores) {
  require(y_true.size() == scores.size(), ErrorCode::argument,
          "label/score length mismatch");
  std::vector<double> pos, neg;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    (y_true[i] == 1 ? pos : neg).push_back(scores[i]);
  }
  require(!pos.empty() && !neg.empty(), ErrorCode::argument,
          "threshold undefined with a single class");
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());

  auto count_ge = [](const std::vector<double>& v, double t) {
    return static_cast<double>(v.end() -
                               std::lower_bound(v.begin(), v.end(), t));
  };

  double best_t = 0.0, best_j = -2.0;
  for (int i = 0; i <= 900; ++i) {
    const double t = static_cast<double>(100 + i) / 1000.0;
    const double tpr = count_ge(pos, t) / static_cast<double>(pos.size());
    const double fpr = count_ge(neg, t) / static_cast<double>(neg.size());
    const double j = tpr - fpr;
    if (j > best_j) {
      best_j = j;
      best_t = t;
    }
  }
  return best_t;
}

}  // namespace coughdx
