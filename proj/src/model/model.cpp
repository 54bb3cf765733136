// Copyright 2026 The dagfl Authors
// SPDX-License-Identifier: Apache-2.0

#include "dagfl/model/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "dagfl/simd/kernels.hpp"

namespace dagfl {

std::size_t ModelShape::param_count() const {
  if (hidden == 0) return classes * inputs + classes;
  return hidden * inputs + hidden + classes * hidden + classes;
}

ModelParams ModelParams::zeros(const ModelShape& shape) {
  return {shape, std::vector<double>(shape.param_count(), 0.0)};
}

ModelParams init_params(const ModelShape& shape, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  ModelParams p = ModelParams::zeros(shape);
  for (double& v : p.values) v = u(rng);
  return p;
}

bool all_finite(const ModelParams& model) {
  return std::all_of(model.values.begin(), model.values.end(),
                     [](double v) { return std::isfinite(v); });
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw ModelError("learning_rate must be a finite non-negative number");
  }
  if (minibatch < 1) throw ModelError("minibatch must be >= 1");
  if (epochs < 1) throw ModelError("epochs must be >= 1");
}

void check_compatible(const ModelParams& model, const DataShard& data) {
  if (model.values.size() != model.shape.param_count()) {
    throw ModelError("parameter vector does not match its shape");
  }
  if (model.shape.inputs != data.dim || model.shape.classes != data.classes) {
    throw ModelError("model shape (" + std::to_string(model.shape.inputs) + " -> " +
                     std::to_string(model.shape.classes) + ") incompatible with data (" +
                     std::to_string(data.dim) + " dims, " + std::to_string(data.classes) +
                     " classes)");
  }
}

namespace {

// Views into the flat parameter vector.
template <class T>
struct Layers {
  std::span<T> w1, b1, w2, b2;  // w2/b2 empty for the linear model
};

template <class T>
Layers<T> split(const ModelShape& s, std::span<T> v) {
  Layers<T> l;
  if (s.hidden == 0) {
    l.w1 = v.subspan(0, s.classes * s.inputs);
    l.b1 = v.subspan(s.classes * s.inputs, s.classes);
    return l;
  }
  std::size_t o = 0;
  l.w1 = v.subspan(o, s.hidden * s.inputs);
  o += s.hidden * s.inputs;
  l.b1 = v.subspan(o, s.hidden);
  o += s.hidden;
  l.w2 = v.subspan(o, s.classes * s.hidden);
  o += s.classes * s.hidden;
  l.b2 = v.subspan(o, s.classes);
  return l;
}

struct Workspace {
  std::vector<double> hidden;
  std::vector<double> logits;
  std::vector<double> delta_out;
  std::vector<double> delta_hidden;

  explicit Workspace(const ModelShape& s)
      : hidden(s.hidden), logits(s.classes), delta_out(s.classes), delta_hidden(s.hidden) {}
};

void forward(const ModelShape& s, const Layers<const double>& p, std::span<const double> x,
             Workspace& ws) {
  if (s.hidden == 0) {
    simd::matvec_bias(p.w1, p.b1, x, ws.logits);
    return;
  }
  simd::matvec_bias(p.w1, p.b1, x, ws.hidden);
  for (double& h : ws.hidden) h = std::tanh(h);
  simd::matvec_bias(p.w2, p.b2, ws.hidden, ws.logits);
}

// Turns logits into probabilities in place; returns -log p[label].
double softmax_xent(std::span<double> z, int label) {
  double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  double log_sum = std::log(sum);
  double loss = log_sum - std::log(z[static_cast<std::size_t>(label)]);
  for (double& v : z) v /= sum;
  return loss;
}

int argmax_lowest(std::span<const double> z) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < z.size(); ++c) {
    if (z[c] > z[best]) best = c;
  }
  return static_cast<int>(best);
}

}  // namespace

void logits(const ModelParams& model, std::span<const double> x, std::span<double> out) {
  Workspace ws(model.shape);
  auto p = split<const double>(model.shape, model.values);
  forward(model.shape, p, x, ws);
  std::copy(ws.logits.begin(), ws.logits.end(), out.begin());
}

int predict(const ModelParams& model, std::span<const double> x) {
  Workspace ws(model.shape);
  forward(model.shape, split<const double>(model.shape, model.values), x, ws);
  return argmax_lowest(ws.logits);
}

double loss_and_gradient(const ModelParams& model, const DataShard& data,
                         std::span<const std::size_t> indices, std::span<double> grad) {
  const ModelShape& s = model.shape;
  std::fill(grad.begin(), grad.end(), 0.0);
  if (indices.empty()) return 0.0;
  auto p = split<const double>(s, model.values);
  auto g = split<double>(s, grad);
  Workspace ws(s);
  double total = 0.0;
  for (std::size_t i : indices) {
    auto x = data.row(i);
    int y = data.labels[i];
    forward(s, p, x, ws);
    total += softmax_xent(ws.logits, y);
    // d loss / d logits = softmax - onehot
    std::copy(ws.logits.begin(), ws.logits.end(), ws.delta_out.begin());
    ws.delta_out[static_cast<std::size_t>(y)] -= 1.0;
    if (s.hidden == 0) {
      simd::add_outer(g.w1, ws.delta_out, x);
      simd::axpy(1.0, ws.delta_out, g.b1);
      continue;
    }
    simd::add_outer(g.w2, ws.delta_out, ws.hidden);
    simd::axpy(1.0, ws.delta_out, g.b2);
    simd::matvec_transposed(p.w2, ws.delta_out, ws.delta_hidden);
    for (std::size_t j = 0; j < s.hidden; ++j) {
      ws.delta_hidden[j] *= 1.0 - ws.hidden[j] * ws.hidden[j];
    }
    simd::add_outer(g.w1, ws.delta_hidden, x);
    simd::axpy(1.0, ws.delta_hidden, g.b1);
  }
  const double inv = 1.0 / static_cast<double>(indices.size());
  simd::scale(inv, grad);
  return total * inv;
}

TrainResult train(const ModelParams& start, const DataShard& data, const TrainConfig& cfg,
                  Rng& rng) {
  cfg.validate();
  if (data.empty()) throw ModelError("train: empty data shard");
  check_compatible(start, data);

  TrainResult out{start, 0.0, 0};
  std::vector<double> grad(start.values.size());
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double loss_sum = 0.0;
  std::size_t seen = 0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t b = 0; b < order.size(); b += cfg.minibatch) {
      std::size_t len = std::min(cfg.minibatch, order.size() - b);
      std::span<const std::size_t> batch(order.data() + b, len);
      double loss = loss_and_gradient(out.model, data, batch, grad);
      if (!std::isfinite(loss) ||
          !std::all_of(grad.begin(), grad.end(), [](double v) { return std::isfinite(v); })) {
        throw ModelError("train: non-finite gradient at epoch " + std::to_string(epoch) +
                         ", step " + std::to_string(out.steps) + " (loss " +
                         std::to_string(loss) + ")");
      }
      loss_sum += loss * static_cast<double>(len);
      seen += len;
      simd::axpy(-cfg.learning_rate, grad, out.model.values);
      ++out.steps;
    }
  }
  out.mean_loss = loss_sum / static_cast<double>(seen);
  return out;
}

Evaluation evaluate(const ModelParams& model, const DataShard& data) {
  if (data.empty()) throw ModelError("evaluate: empty data shard");
  check_compatible(model, data);
  auto p = split<const double>(model.shape, model.values);
  Workspace ws(model.shape);
  std::size_t correct = 0;
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    forward(model.shape, p, data.row(i), ws);
    if (argmax_lowest(ws.logits) == data.labels[i]) ++correct;
    loss += softmax_xent(ws.logits, data.labels[i]);
  }
  const double n = static_cast<double>(data.size());
  return {static_cast<double>(correct) / n, loss / n};
}

ModelParams federated_average(std::span<const ModelParams* const> models,
                              std::span<const double> weights) {
  if (models.empty()) throw ModelError("federated_average: no models");
  if (weights.size() != models.size()) {
    throw ModelError("federated_average: " + std::to_string(models.size()) + " models but " +
                     std::to_string(weights.size()) + " weights");
  }
  double wsum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(wsum - 1.0) > 1e-9) {
    throw ModelError("federated_average: weights sum to " + std::to_string(wsum) + ", not 1");
  }
  const ModelShape& shape = models.front()->shape;
  ModelParams out = ModelParams::zeros(shape);
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (!(models[i]->shape == shape) || models[i]->values.size() != out.values.size()) {
      throw ModelError("federated_average: shape mismatch at model " + std::to_string(i));
    }
    simd::axpy(weights[i], models[i]->values, out.values);
  }
  if (!all_finite(out)) throw ModelError("federated_average: non-finite result");
  return out;
}

ModelParams federated_average(std::span<const ModelParams* const> models) {
  std::vector<double> w(models.size(), models.empty() ? 0.0 : 1.0 / static_cast<double>(models.size()));
  return federated_average(models, w);
}

}  // namespace dagfl
