#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coughdx/core/matrix.hpp"

namespace coughdx {

// The six tunable training knobs.
struct HyperParams {
  int num_trees = 10;
  int depth = 10;
  double features_rate = 1.0;
  double learning_rate = 0.01;
  int batch_size = 256;
  int num_epochs = 1;

  void validate() const;
};

// One soft decision tree stored as flat arrays in heap order (node i has
// children 2i+1 and 2i+2). Each internal node holds an affine decision
// function over the tree's masked features; each leaf holds class logits
// whose softmax is the leaf distribution.
struct TreeParams {
  int depth = 0;
  std::vector<int> feature_mask;     // m distinct feature indices
  std::vector<double> weights;       // n_internal x m
  std::vector<double> biases;        // n_internal
  std::vector<double> leaf_logits;   // n_leaves x n_classes

  int n_internal() const { return (1 << depth) - 1; }
  int n_leaves() const { return 1 << depth; }
  int mask_size() const { return static_cast<int>(feature_mask.size()); }
  std::size_t n_params() const {
    return weights.size() + biases.size() + leaf_logits.size();
  }
};

struct ForestModel {
  int n_features = 0;
  int n_classes = 2;
  std::vector<TreeParams> trees;
};

// Gradient buffers mirroring the parameter layout of a forest.
struct ForestGradients {
  struct TreeGradients {
    std::vector<double> weights, biases, leaf_logits;
  };
  std::vector<TreeGradients> trees;

  static ForestGradients zeros_like(const ForestModel& model);
};

// Mask sampled uniformly without replacement (size ceil(features_rate * D)),
// decision weights ~ U(-0.05, 0.05), biases 0, leaf logits 0.
TreeParams init_tree(int depth, int n_features, double features_rate,
                     std::uint64_t seed);

ForestModel init_forest(const HyperParams& hp, int n_features,
                        std::uint64_t seed);

// Soft routing: d_n = sigmoid(w_n . x_masked + b_n); the probability of
// reaching a leaf is the product of branch probabilities along its path, and
// the output distribution is the reach-probability-weighted mix of leaf
// distributions.
std::array<double, 2> tree_forward(const TreeParams& tree, const double* x,
                                   int n_features);

// Mean of the per-tree distributions. The accumulation is order-insensitive,
// so permuting the trees leaves predictions bit-identical.
std::array<double, 2> forest_forward(const ForestModel& model, const double* x);

// Positive-class probability per row.
std::vector<double> forest_predict_proba(const ForestModel& model,
                                         const Matrix& x);
std::vector<double> forest_predict_proba_serial(const ForestModel& model,
                                                const Matrix& x);

// Mean negative log-likelihood of the forest output over the batch rows,
// with analytic gradients for every decision weight, bias and leaf logit.
double loss_and_gradients(const ForestModel& model, const Matrix& x,
                          const std::vector<int>& y,
                          const std::vector<std::size_t>& rows,
                          ForestGradients& grads);
double loss_and_gradients_serial(const ForestModel& model, const Matrix& x,
                                 const std::vector<int>& y,
                                 const std::vector<std::size_t>& rows,
                                 ForestGradients& grads);

// Minibatch gradient descent with Adam-style adaptive moments
// (beta1 0.9, beta2 0.999, eps 1e-8) over shuffled batches. Returns the
// per-epoch mean training loss.
std::vector<double> train_forest(ForestModel& model, const Matrix& x,
                                 const std::vector<int>& y,
                                 const HyperParams& hp, std::uint64_t seed);

// Versioned JSON serialization; reals round-trip bit-exactly.
std::string forest_to_json(const ForestModel& model);
ForestModel forest_from_json(const std::string& text);
void save_forest(const std::string& path, const ForestModel& model);
ForestModel load_forest(const std::string& path);

}  // namespace coughdx
