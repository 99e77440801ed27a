#include "coughdx/ensemble/extra_trees.hpp"

#include <algorithm>
#include <cmath>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"

namespace coughdx {

namespace {

double gini(std::size_t n, std::size_t c1) {
  if (n == 0) return 0.0;
  const double p1 = static_cast<double>(c1) / static_cast<double>(n);
  const double p0 = 1.0 - p1;
  return 1.0 - p1 * p1 - p0 * p0;
}

struct GrowContext {
  const std::vector<double>& columns;  // column-major values, d x n
  const std::vector<int>& y;
  std::size_t n_rows;
  std::size_t n_features;
  int max_features;
  int min_samples_split;
};

void grow_tree(const GrowContext& ctx, std::uint64_t seed, ExtraTree& tree) {
  Rng rng(seed);
  tree.importances.assign(ctx.n_features, 0.0);

  std::vector<std::size_t> idx(ctx.n_rows);
  for (std::size_t i = 0; i < ctx.n_rows; ++i) idx[i] = i;

  struct Job {
    int node;
    std::size_t begin, end;
  };
  std::vector<Job> stack;
  tree.nodes.emplace_back();
  stack.push_back({0, 0, ctx.n_rows});

  std::vector<int> avail(ctx.n_features);

  while (!stack.empty()) {
    const Job job = stack.back();
    stack.pop_back();
    const std::size_t n = job.end - job.begin;
    std::size_t c1 = 0;
    for (std::size_t i = job.begin; i < job.end; ++i) {
      c1 += static_cast<std::size_t>(ctx.y[idx[i]]);
    }

    ExtraTreeNode& node = tree.nodes[static_cast<std::size_t>(job.node)];
    const bool pure = c1 == 0 || c1 == n;
    if (pure || n < static_cast<std::size_t>(ctx.min_samples_split)) {
      node.p_positive = static_cast<double>(c1) / static_cast<double>(n);
      continue;
    }

    const double imp_parent = gini(n, c1);

    // Draw random candidate features; constants are skipped without counting
    // toward max_features. For each valid candidate the threshold is drawn
    // uniformly strictly inside (min, max).
    for (std::size_t f = 0; f < ctx.n_features; ++f) avail[f] = static_cast<int>(f);
    std::size_t n_avail = ctx.n_features;
    int n_valid = 0;
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_decrease = -1.0;
    std::size_t best_n_left = 0;

    while (n_avail > 0 && n_valid < ctx.max_features) {
      const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(n_avail));
      const int f = avail[pick];
      avail[pick] = avail[--n_avail];

      const double* col = ctx.columns.data() +
                          static_cast<std::size_t>(f) * ctx.n_rows;
      double fmin = col[idx[job.begin]], fmax = fmin;
      for (std::size_t i = job.begin + 1; i < job.end; ++i) {
        const double v = col[idx[i]];
        fmin = std::min(fmin, v);
        fmax = std::max(fmax, v);
      }
      if (fmin == fmax) continue;  // constant within the node
      ++n_valid;

      double thr;
      do {
        thr = fmin + rng.uniform() * (fmax - fmin);
      } while (!(thr > fmin && thr < fmax));

      std::size_t n_left = 0, c1_left = 0;
      for (std::size_t i = job.begin; i < job.end; ++i) {
        if (col[idx[i]] <= thr) {
          ++n_left;
          c1_left += static_cast<std::size_t>(ctx.y[idx[i]]);
        }
      }
      const std::size_t n_right = n - n_left;
      const std::size_t c1_right = c1 - c1_left;
      const double child_imp =
          (static_cast<double>(n_left) * gini(n_left, c1_left) +
           static_cast<double>(n_right) * gini(n_right, c1_right)) /
          static_cast<double>(n);
      const double decrease = imp_parent - child_imp;
      if (decrease > best_decrease) {
        best_decrease = decrease;
        best_feature = f;
        best_threshold = thr;
        best_n_left = n_left;
      }
    }

    if (best_feature < 0) {  // nothing splittable
      node.p_positive = static_cast<double>(c1) / static_cast<double>(n);
      continue;
    }

    const double* col = ctx.columns.data() +
                        static_cast<std::size_t>(best_feature) * ctx.n_rows;
    const double thr = best_threshold;
    std::partition(idx.begin() + static_cast<long>(job.begin),
                   idx.begin() + static_cast<long>(job.end),
                   [col, thr](std::size_t i) { return col[i] <= thr; });

    tree.importances[static_cast<std::size_t>(best_feature)] +=
        static_cast<double>(n) / static_cast<double>(ctx.n_rows) * best_decrease;

    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    {
      ExtraTreeNode& nd = tree.nodes[static_cast<std::size_t>(job.node)];
      nd.feature = best_feature;
      nd.threshold = thr;
      nd.left = left_id;
      nd.right = right_id;
    }
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    stack.push_back({right_id, job.begin + best_n_left, job.end});
    stack.push_back({left_id, job.begin, job.begin + best_n_left});
  }

  double total = 0.0;
  for (double v : tree.importances) total += v;
  if (total > 0.0) {
    for (double& v : tree.importances) v /= total;
  }
}

ExtraTreesModel fit_impl(const Matrix& x, const std::vector<int>& y,
                         const ExtraTreesOptions& opt, bool parallel) {
  require(x.rows == y.size(), ErrorCode::argument, "row/label count mismatch");
  require(x.rows >= 2, ErrorCode::argument, "need at least 2 rows");
  require(opt.n_estimators >= 1, ErrorCode::argument, "need >= 1 tree");
  require(x.all_finite(), ErrorCode::invalid_signal, "non-finite feature value");
  std::size_t c1 = 0;
  for (int v : y) {
    require(v == 0 || v == 1, ErrorCode::argument, "labels must be 0/1");
    c1 += static_cast<std::size_t>(v);
  }
  require(c1 > 0 && c1 < y.size(), ErrorCode::insufficient_data,
          "degenerate target: only one class present");

  ExtraTreesModel model;
  model.n_features = x.cols;
  model.opt = opt;
  if (model.opt.max_features <= 0) {
    model.opt.max_features = static_cast<int>(
        std::ceil(std::sqrt(static_cast<double>(x.cols))));
  }
  model.trees.resize(static_cast<std::size_t>(opt.n_estimators));

  // Column-major copy for cache-friendly per-feature scans.
  std::vector<double> columns(x.cols * x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    for (std::size_t c = 0; c < x.cols; ++c) {
      columns[c * x.rows + r] = x.at(r, c);
    }
  }

  const GrowContext ctx{columns, y,  x.rows, x.cols,
                        model.opt.max_features, model.opt.min_samples_split};
  const std::size_t n_trees = model.trees.size();
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t t = 0; t < n_trees; ++t) {
    grow_tree(ctx, derive_seed(opt.seed, t), model.trees[t]);
  }
  model.fitted = true;
  return model;
}

}  // namespace

ExtraTreesModel fit_extra_trees(const Matrix& x, const std::vector<int>& y,
                                const ExtraTreesOptions& opt) {
  return fit_impl(x, y, opt, true);
}

ExtraTreesModel fit_extra_trees_serial(const Matrix& x,
                                       const std::vector<int>& y,
                                       const ExtraTreesOptions& opt) {
  return fit_impl(x, y, opt, false);
}

std::vector<double> extra_trees_predict_proba(const ExtraTreesModel& model,
                                              const Matrix& x) {
  require(model.fitted, ErrorCode::state, "model not fitted");
  require(x.cols == model.n_features, ErrorCode::argument,
          "feature count mismatch");
  std::vector<double> proba(x.rows, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t r = 0; r < x.rows; ++r) {
    const double* row = x.row(r);
    double acc = 0.0;
    for (const ExtraTree& tree : model.trees) {
      int node = 0;
      while (tree.nodes[static_cast<std::size_t>(node)].feature >= 0) {
        const ExtraTreeNode& nd = tree.nodes[static_cast<std::size_t>(node)];
        node = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold
                   ? nd.left
                   : nd.right;
      }
      acc += tree.nodes[static_cast<std::size_t>(node)].p_positive;
    }
    proba[r] = acc / static_cast<double>(model.trees.size());
  }
  return proba;
}

std::vector<double> feature_importances(const ExtraTreesModel& model) {
  require(model.fitted, ErrorCode::state, "model not fitted");
  std::vector<double> imp(model.n_features, 0.0);
  for (const ExtraTree& tree : model.trees) {
    for (std::size_t f = 0; f < model.n_features; ++f) {
      imp[f] += tree.importances[f];
    }
  }
  double total = 0.0;
  for (double v : imp) total += v;
  if (total > 0.0) {
    for (double& v : imp) v /= total;
  }
  return imp;
}

}  // namespace coughdx
