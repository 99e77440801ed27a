#include "coughdx/neural/forest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "coughdx/core/error.hpp"
#include "coughdx/core/rng.hpp"

namespace coughdx {

namespace {

constexpr double kProbFloor = 1e-12;

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

// Softmax of a two-logit row.
std::array<double, 2> softmax2(const double* logits) {
  const double m = std::max(logits[0], logits[1]);
  const double e0 = std::exp(logits[0] - m);
  const double e1 = std::exp(logits[1] - m);
  const double z = e0 + e1;
  return {e0 / z, e1 / z};
}

// Scratch buffers for one tree walk; sized to the largest tree on demand.
struct TreeScratch {
  std::vector<double> decisions;   // n_internal
  std::vector<double> reach;       // full heap: n_internal + n_leaves
  std::vector<double> subtree;     // full heap, class-y mix below each node
  std::vector<std::array<double, 2>> leaf_pi;

  void resize(const TreeParams& tree) {
    const std::size_t internal = static_cast<std::size_t>(tree.n_internal());
    const std::size_t heap = internal + static_cast<std::size_t>(tree.n_leaves());
    decisions.resize(internal);
    reach.resize(heap);
    subtree.resize(heap);
    leaf_pi.resize(static_cast<std::size_t>(tree.n_leaves()));
  }
};

// Forward pass filling decisions, reach probabilities and leaf distributions.
std::array<double, 2> tree_forward_scratch(const TreeParams& tree,
                                           const double* x, TreeScratch& s) {
  const int internal = tree.n_internal();
  const int leaves = tree.n_leaves();
  const int m = tree.mask_size();

  for (int nidx = 0; nidx < internal; ++nidx) {
    const double* w = tree.weights.data() + static_cast<std::size_t>(nidx) * m;
    double a = tree.biases[static_cast<std::size_t>(nidx)];
    for (int j = 0; j < m; ++j) {
      a += w[j] * x[tree.feature_mask[static_cast<std::size_t>(j)]];
    }
    s.decisions[static_cast<std::size_t>(nidx)] = sigmoid(a);
  }

  s.reach[0] = 1.0;
  for (int nidx = 0; nidx < internal; ++nidx) {
    const double p = s.reach[static_cast<std::size_t>(nidx)];
    const double d = s.decisions[static_cast<std::size_t>(nidx)];
    s.reach[static_cast<std::size_t>(2 * nidx + 1)] = p * d;
    s.reach[static_cast<std::size_t>(2 * nidx + 2)] = p * (1.0 - d);
  }

  std::array<double, 2> out{0.0, 0.0};
  for (int l = 0; l < leaves; ++l) {
    const auto pi =
        softmax2(tree.leaf_logits.data() + static_cast<std::size_t>(l) * 2);
    s.leaf_pi[static_cast<std::size_t>(l)] = pi;
    const double mu = s.reach[static_cast<std::size_t>(internal + l)];
    out[0] += mu * pi[0];
    out[1] += mu * pi[1];
  }
  return out;
}

// Exact-order mean of per-tree outputs: contributions are sorted before
// summation so tree order cannot change the result.
std::array<double, 2> average_tree_outputs(
    std::vector<std::array<double, 2>>& outputs) {
  std::sort(outputs.begin(), outputs.end());
  std::array<double, 2> mean{0.0, 0.0};
  for (const auto& o : outputs) {
    mean[0] += o[0];
    mean[1] += o[1];
  }
  mean[0] /= static_cast<double>(outputs.size());
  mean[1] /= static_cast<double>(outputs.size());
  return mean;
}

std::array<double, 2> forest_forward_scratch(const ForestModel& model,
                                             const double* x, TreeScratch& s,
                                             std::vector<std::array<double, 2>>& outs) {
  outs.clear();
  for (const TreeParams& tree : model.trees) {
    s.resize(tree);
    outs.push_back(tree_forward_scratch(tree, x, s));
  }
  return average_tree_outputs(outs);
}

void validate_input_row(const double* x, int n_features) {
  for (int i = 0; i < n_features; ++i) {
    require(std::isfinite(x[i]), ErrorCode::invalid_signal,
            "non-finite input feature");
  }
}

double loss_grad_impl(const ForestModel& model, const Matrix& x,
                      const std::vector<int>& y,
                      const std::vector<std::size_t>& rows,
                      ForestGradients& grads, bool parallel) {
  require(!model.trees.empty(), ErrorCode::state, "empty forest");
  require(!rows.empty(), ErrorCode::argument, "empty batch");
  require(x.cols == static_cast<std::size_t>(model.n_features),
          ErrorCode::argument, "feature count mismatch");

  const std::size_t batch = rows.size();
  const std::size_t n_trees = model.trees.size();
  const double k = static_cast<double>(n_trees);

  // Pass 1: forest probability of the true class per row.
  std::vector<double> p_true(batch);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t b = 0; b < batch; ++b) {
    TreeScratch scratch;
    std::vector<std::array<double, 2>> outs;
    const double* xr = x.row(rows[b]);
    validate_input_row(xr, model.n_features);
    const auto dist = forest_forward_scratch(model, xr, scratch, outs);
    p_true[b] = dist[static_cast<std::size_t>(y[rows[b]])];
  }

  double loss = 0.0;
  for (std::size_t b = 0; b < batch; ++b) {
    loss -= std::log(std::max(p_true[b], kProbFloor));
  }
  loss /= static_cast<double>(batch);

  // Pass 2: per-tree gradients; each tree walks the batch in row order, so
  // the result is independent of how trees are scheduled across threads.
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t t = 0; t < n_trees; ++t) {
    const TreeParams& tree = model.trees[t];
    auto& g = grads.trees[t];
    std::fill(g.weights.begin(), g.weights.end(), 0.0);
    std::fill(g.biases.begin(), g.biases.end(), 0.0);
    std::fill(g.leaf_logits.begin(), g.leaf_logits.end(), 0.0);

    TreeScratch s;
    s.resize(tree);
    const int internal = tree.n_internal();
    const int leaves = tree.n_leaves();
    const int m = tree.mask_size();

    for (std::size_t b = 0; b < batch; ++b) {
      const double* xr = x.row(rows[b]);
      const int label = y[rows[b]];
      tree_forward_scratch(tree, xr, s);

      // d(loss)/d(P_T(y)) for this row; the forest average contributes 1/k.
      const double coef =
          -1.0 / (static_cast<double>(batch) * k *
                  std::max(p_true[b], kProbFloor));

      // Class-y mix of the subtree below each node, leaves upward.
      for (int l = 0; l < leaves; ++l) {
        s.subtree[static_cast<std::size_t>(internal + l)] =
            s.leaf_pi[static_cast<std::size_t>(l)][static_cast<std::size_t>(label)];
      }
      for (int nidx = internal - 1; nidx >= 0; --nidx) {
        const double d = s.decisions[static_cast<std::size_t>(nidx)];
        s.subtree[static_cast<std::size_t>(nidx)] =
            d * s.subtree[static_cast<std::size_t>(2 * nidx + 1)] +
            (1.0 - d) * s.subtree[static_cast<std::size_t>(2 * nidx + 2)];
      }

      for (int l = 0; l < leaves; ++l) {
        const double mu = s.reach[static_cast<std::size_t>(internal + l)];
        const auto& pi = s.leaf_pi[static_cast<std::size_t>(l)];
        double* gl = g.leaf_logits.data() + static_cast<std::size_t>(l) * 2;
        const double py = pi[static_cast<std::size_t>(label)];
        for (int c = 0; c < 2; ++c) {
          const double delta = c == label ? 1.0 : 0.0;
          gl[c] += coef * mu * py * (delta - pi[static_cast<std::size_t>(c)]);
        }
      }

      for (int nidx = 0; nidx < internal; ++nidx) {
        const double d = s.decisions[static_cast<std::size_t>(nidx)];
        const double g_d = coef * s.reach[static_cast<std::size_t>(nidx)] *
                           (s.subtree[static_cast<std::size_t>(2 * nidx + 1)] -
                            s.subtree[static_cast<std::size_t>(2 * nidx + 2)]);
        const double g_a = g_d * d * (1.0 - d);
        double* gw = g.weights.data() + static_cast<std::size_t>(nidx) * m;
        for (int j = 0; j < m; ++j) {
          gw[j] += g_a * xr[tree.feature_mask[static_cast<std::size_t>(j)]];
        }
        g.biases[static_cast<std::size_t>(nidx)] += g_a;
      }
    }
  }
  return loss;
}

}  // namespace

void HyperParams::validate() const {
  require(num_trees >= 1, ErrorCode::argument, "num_trees must be >= 1");
  require(depth >= 1 && depth <= 16, ErrorCode::argument,
          "depth must be in [1, 16]");
  require(features_rate > 0.0 && features_rate <= 1.0, ErrorCode::argument,
          "features_rate must be in (0, 1]");
  require(learning_rate > 0.0, ErrorCode::argument,
          "learning_rate must be positive");
  require(batch_size >= 1, ErrorCode::argument, "batch_size must be >= 1");
  require(num_epochs >= 0, ErrorCode::argument, "num_epochs must be >= 0");
}

ForestGradients ForestGradients::zeros_like(const ForestModel& model) {
  ForestGradients g;
  g.trees.resize(model.trees.size());
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    g.trees[t].weights.assign(model.trees[t].weights.size(), 0.0);
    g.trees[t].biases.assign(model.trees[t].biases.size(), 0.0);
    g.trees[t].leaf_logits.assign(model.trees[t].leaf_logits.size(), 0.0);
  }
  return g;
}

TreeParams init_tree(int depth, int n_features, double features_rate,
                     std::uint64_t seed) {
  require(depth >= 1 && depth <= 16, ErrorCode::argument,
          "depth must be in [1, 16]");
  require(n_features >= 1, ErrorCode::argument, "n_features must be >= 1");
  require(features_rate > 0.0 && features_rate <= 1.0, ErrorCode::argument,
          "features_rate must be in (0, 1]");
  const int m = static_cast<int>(
      std::ceil(features_rate * static_cast<double>(n_features)));
  require(m >= 1, ErrorCode::argument, "feature mask rounds to zero");

  Rng rng(seed);
  TreeParams tree;
  tree.depth = depth;
  tree.feature_mask = rng.sample_without_replacement(n_features, m);
  std::sort(tree.feature_mask.begin(), tree.feature_mask.end());
  const std::size_t internal = static_cast<std::size_t>(tree.n_internal());
  tree.weights.resize(internal * static_cast<std::size_t>(m));
  for (double& w : tree.weights) w = rng.uniform(-0.05, 0.05);
  tree.biases.assign(internal, 0.0);
  tree.leaf_logits.assign(static_cast<std::size_t>(tree.n_leaves()) * 2, 0.0);
  return tree;
}

ForestModel init_forest(const HyperParams& hp, int n_features,
                        std::uint64_t seed) {
  hp.validate();
  ForestModel model;
  model.n_features = n_features;
  model.trees.reserve(static_cast<std::size_t>(hp.num_trees));
  for (int t = 0; t < hp.num_trees; ++t) {
    model.trees.push_back(init_tree(hp.depth, n_features, hp.features_rate,
                                    derive_seed(seed, static_cast<std::uint64_t>(t))));
  }
  return model;
}

std::array<double, 2> tree_forward(const TreeParams& tree, const double* x,
                                   int n_features) {
  validate_input_row(x, n_features);
  TreeScratch s;
  s.resize(tree);
  return tree_forward_scratch(tree, x, s);
}

std::array<double, 2> forest_forward(const ForestModel& model,
                                     const double* x) {
  require(!model.trees.empty(), ErrorCode::state, "empty forest");
  validate_input_row(x, model.n_features);
  TreeScratch s;
  std::vector<std::array<double, 2>> outs;
  return forest_forward_scratch(model, x, s, outs);
}

namespace {

std::vector<double> predict_impl(const ForestModel& model, const Matrix& x,
                                 bool parallel) {
  require(!model.trees.empty(), ErrorCode::state, "empty forest");
  require(x.cols == static_cast<std::size_t>(model.n_features),
          ErrorCode::argument, "feature count mismatch");
  std::vector<double> proba(x.rows);
#pragma omp parallel for schedule(static) if (parallel)
  for (std::size_t r = 0; r < x.rows; ++r) {
    TreeScratch s;
    std::vector<std::array<double, 2>> outs;
    const double* xr = x.row(r);
    validate_input_row(xr, model.n_features);
    proba[r] = forest_forward_scratch(model, xr, s, outs)[1];
  }
  return proba;
}

}  // namespace

std::vector<double> forest_predict_proba(const ForestModel& model,
                                         const Matrix& x) {
  return predict_impl(model, x, true);
}

std::vector<double> forest_predict_proba_serial(const ForestModel& model,
                                                const Matrix& x) {
  return predict_impl(model, x, false);
}

double loss_and_gradients(const ForestModel& model, const Matrix& x,
                          const std::vector<int>& y,
                          const std::vector<std::size_t>& rows,
                          ForestGradients& grads) {
  return loss_grad_impl(model, x, y, rows, grads, true);
}

double loss_and_gradients_serial(const ForestModel& model, const Matrix& x,
                                 const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows,
                                 ForestGradients& grads) {
  return loss_grad_impl(model, x, y, rows, grads, false);
}

std::vector<double> train_forest(ForestModel& model, const Matrix& x,
                                 const std::vector<int>& y,
                                 const HyperParams& hp, std::uint64_t seed) {
  hp.validate();
  require(x.rows == y.size(), ErrorCode::argument, "row/label count mismatch");
  std::vector<double> history;
  if (hp.num_epochs == 0) return history;

  ForestGradients grads = ForestGradients::zeros_like(model);

  // Adam moment buffers mirror the parameter layout.
  ForestGradients m1 = ForestGradients::zeros_like(model);
  ForestGradients m2 = ForestGradients::zeros_like(model);
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  long step = 0;

  Rng rng(derive_seed(seed, 0x5ffe));
  std::vector<std::size_t> order(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) order[i] = i;

  auto adam_update = [&](std::vector<double>& p, std::vector<double>& g,
                         std::vector<double>& m, std::vector<double>& v,
                         double bc1, double bc2) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g[i];
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g[i] * g[i];
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p[i] -= hp.learning_rate * mhat / (std::sqrt(vhat) + kEps);
    }
  };

  history.reserve(static_cast<std::size_t>(hp.num_epochs));
  for (int epoch = 0; epoch < hp.num_epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(hp.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(hp.batch_size));
      const std::vector<std::size_t> batch(order.begin() + static_cast<long>(start),
                                           order.begin() + static_cast<long>(end));
      const double loss = loss_and_gradients(model, x, y, batch, grads);
      epoch_loss += loss * static_cast<double>(batch.size());
      seen += batch.size();

      ++step;
      const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t t = 0; t < model.trees.size(); ++t) {
        adam_update(model.trees[t].weights, grads.trees[t].weights,
                    m1.trees[t].weights, m2.trees[t].weights, bc1, bc2);
        adam_update(model.trees[t].biases, grads.trees[t].biases,
                    m1.trees[t].biases, m2.trees[t].biases, bc1, bc2);
        adam_update(model.trees[t].leaf_logits, grads.trees[t].leaf_logits,
                    m1.trees[t].leaf_logits, m2.trees[t].leaf_logits, bc1, bc2);
      }
    }
    history.push_back(epoch_loss / static_cast<double>(seen));
  }
  return history;
}

std::string forest_to_json(const ForestModel& model) {
  nlohmann::json j;
  j["format"] = "coughdx-forest";
  j["version"] = 1;
  j["n_features"] = model.n_features;
  j["n_classes"] = model.n_classes;
  nlohmann::json trees = nlohmann::json::array();
  for (const TreeParams& t : model.trees) {
    nlohmann::json jt;
    jt["depth"] = t.depth;
    jt["feature_mask"] = t.feature_mask;
    jt["weights"] = t.weights;
    jt["biases"] = t.biases;
    jt["leaf_logits"] = t.leaf_logits;
    trees.push_back(std::move(jt));
  }
  j["trees"] = std::move(trees);
  return j.dump();
}

ForestModel forest_from_json(const std::string& text) {
  ForestModel model;
  try {
    const auto j = nlohmann::json::parse(text);
    require(j.at("format") == "coughdx-forest", ErrorCode::parse,
            "not a forest model file");
    require(j.at("version") == 1, ErrorCode::parse,
            "unsupported forest model version");
    model.n_features = j.at("n_features").get<int>();
    model.n_classes = j.at("n_classes").get<int>();
    for (const auto& jt : j.at("trees")) {
      TreeParams t;
      t.depth = jt.at("depth").get<int>();
      t.feature_mask = jt.at("feature_mask").get<std::vector<int>>();
      t.weights = jt.at("weights").get<std::vector<double>>();
      t.biases = jt.at("biases").get<std::vector<double>>();
      t.leaf_logits = jt.at("leaf_logits").get<std::vector<double>>();
      require(t.biases.size() == static_cast<std::size_t>(t.n_internal()) &&
                  t.leaf_logits.size() ==
                      static_cast<std::size_t>(t.n_leaves()) * 2 &&
                  t.weights.size() ==
                      static_cast<std::size_t>(t.n_internal()) *
                          t.feature_mask.size(),
              ErrorCode::parse, "inconsistent tree shapes");
      model.trees.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::parse, std::string("bad forest JSON: ") + e.what());
  }
  return model;
}

void save_forest(const std::string& path, const ForestModel& model) {
  std::ofstream out(path);
  require(out.good(), ErrorCode::io, "cannot write " + path);
  out << forest_to_json(model);
  require(out.good(), ErrorCode::io, "write failed for " + path);
}

ForestModel load_forest(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return forest_from_json(text);
}

}  // namespace coughdx
