// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "dagfl/data/shard.hpp"

namespace dagfl {

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// hidden == 0 selects a linear softmax classifier; otherwise one tanh
// hidden layer of that width feeds the softmax output.
struct ModelShape {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::size_t classes = 0;

  std::size_t param_count() const;
  bool operator==(const ModelShape&) const = default;
};

// Flat parameter vector. Layout, row-major throughout:
//   linear: W[classes x inputs], b[classes]
//   hidden: W1[hidden x inputs], b1[hidden], W2[classes x hidden], b2[classes]
struct ModelParams {
  ModelShape shape;
  std::vector<double> values;

  static ModelParams zeros(const ModelShape& shape);
  bool operator==(const ModelParams&) const = default;
};

// Uniform in [-0.05, 0.05].
ModelParams init_params(const ModelShape& shape, Rng& rng);

bool all_finite(const ModelParams& model);

struct TrainConfig {
  double learning_rate = 0.05;
  std::size_t minibatch = 100;
  std::size_t epochs = 1;

  // Throws ModelError naming the offending field.
  void validate() const;
};

struct TrainResult {
  ModelParams model;
  // Mean cross-entropy over every sample drawn, measured before each step.
  double mean_loss = 0.0;
  std::size_t steps = 0;
};

// Minibatch SGD on cross-entropy: each epoch reshuffles the shard and walks
// it in batches of cfg.minibatch (last batch may be short).
TrainResult train(const ModelParams& start, const DataShard& data, const TrainConfig& cfg,
                  Rng& rng);

struct Evaluation {
  double accuracy = 0.0;
  double loss = 0.0;
};

Evaluation evaluate(const ModelParams& model, const DataShard& data);

// Argmax of the logits; ties go to the lowest class index.
int predict(const ModelParams& model, std::span<const double> x);

void logits(const ModelParams& model, std::span<const double> x, std::span<double> out);

// Mean cross-entropy over the selected samples; grad receives the mean
// gradient (same layout as the parameters).
double loss_and_gradient(const ModelParams& model, const DataShard& data,
                         std::span<const std::size_t> indices, std::span<double> grad);

// Weighted elementwise sum. Weights must sum to 1 within 1e-9.
ModelParams federated_average(std::span<const ModelParams* const> models,
                              std::span<const double> weights);
// Equal weights 1/k.
ModelParams federated_average(std::span<const ModelParams* const> models);

void check_compatible(const ModelParams& model, const DataShard& data);

}  // namespace dagfl
