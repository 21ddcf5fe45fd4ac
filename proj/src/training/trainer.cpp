// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/training/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "connectome/autodiff/ops.hpp"
#include "connectome/autodiff/tape.hpp"
#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::training {

namespace {

std::size_t argmax_row(const ad::Tensor& logits) {
  const auto& v = logits.values();
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

void check_indices(std::span<const models::PreparedGraph> graphs, std::span<const std::size_t> indices) {
  if (indices.empty()) throw ContractError("evaluation index list is empty");
  for (auto i : indices) {
    if (i >= graphs.size()) {
      throw IndexError("graph index " + std::to_string(i) + " outside " + std::to_string(graphs.size()) + " graphs");
    }
  }
}

}  // namespace

std::vector<models::PreparedGraph> prepare_graphs(const models::Model& model,
                                                  std::span<const data::ConnectomeGraph> graphs,
                                                  std::uint64_t run_seed) {
  std::vector<models::PreparedGraph> out;
  out.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    out.push_back(model.prepare(graphs[i], derive_seed(run_seed, {fnv1a("structure"), i})));
  }
  return out;
}

SplitMetrics evaluate_split(const models::Model& model, std::span<const models::PreparedGraph> graphs,
                            std::span<const std::size_t> indices) {
  check_indices(graphs, indices);
  std::size_t correct = 0;
  double loss = 0.0;
  for (auto i : indices) {
    ad::Tape tape(false);
    models::ForwardContext ctx{ad::Mode::eval, 0, nullptr};
    const auto logits = model.forward(tape, graphs[i], ctx);
    const int label = graphs[i].label;
    if (argmax_row(logits) == static_cast<std::size_t>(label)) ++correct;
    loss += ad::cross_entropy(tape, logits, std::span<const int>(&label, 1)).item();
  }
  const auto n = static_cast<double>(indices.size());
  return {100.0 * static_cast<double>(correct) / n, loss / n};
}

double evaluate(const models::Model& model, std::span<const models::PreparedGraph> graphs,
                std::span<const std::size_t> indices) {
  check_indices(graphs, indices);
  std::size_t correct = 0;
  for (auto i : indices) {
    ad::Tape tape(false);
    models::ForwardContext ctx{ad::Mode::eval, 0, nullptr};
    if (argmax_row(model.forward(tape, graphs[i], ctx)) == static_cast<std::size_t>(graphs[i].label)) ++correct;
  }
  return 100.0 * static_cast<double>(correct) / static_cast<double>(indices.size());
}

EpochMetrics train_epoch(models::Model& model, ad::AdamState& optimizer,
                         std::span<const models::PreparedGraph> graphs, const data::DatasetSplits& splits,
                         const TrainConfig& config, int epoch, std::uint64_t run_seed) {
  if (splits.train.empty()) throw ContractError("training split is empty");
  if (config.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  for (auto i : splits.train) {
    if (i >= graphs.size()) throw IndexError("training index " + std::to_string(i) + " out of range");
  }
  const double lr = lr_at(epoch, config);
  const auto epoch_tag = static_cast<std::uint64_t>(epoch);

  std::vector<std::size_t> order = splits.train;
  Rng rng(derive_seed(run_seed, {fnv1a("shuffle"), epoch_tag}));
  std::shuffle(order.begin(), order.end(), rng);

  const auto params = model.params().tensors();
  double loss_sum = 0.0;
  std::size_t batch = 0;
  for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch) {
    const std::size_t end = std::min(order.size(), start + config.batch_size);
    const double inv = 1.0 / static_cast<double>(end - start);
    model.params().zero_grad();
    for (std::size_t pos = start; pos < end; ++pos) {
      const auto& g = graphs[order[pos]];
      ad::Tape tape;
      models::ForwardContext ctx{ad::Mode::train, derive_seed(run_seed, {fnv1a("forward"), epoch_tag, pos}),
                                 nullptr};
      const auto logits = model.forward(tape, g, ctx);
      const int label = g.label;
      const auto loss = ad::cross_entropy(tape, logits, std::span<const int>(&label, 1));
      if (!std::isfinite(loss.item())) {
        throw DivergenceError(epoch, batch);
      }
      loss_sum += loss.item();
      tape.backward(ad::scale(tape, loss, inv));
    }
    ad::adam_step(params, optimizer, lr);
  }

  EpochMetrics m;
  m.epoch = epoch;
  m.lr = lr;
  m.train_loss = loss_sum / static_cast<double>(order.size());
  m.train = evaluate_split(model, graphs, splits.train);
  if (!splits.val.empty()) m.val = evaluate_split(model, graphs, splits.val);
  if (!splits.test.empty()) m.test = evaluate_split(model, graphs, splits.test);
  return m;
}

int best_val_epoch(std::span<const EpochMetrics> curve) {
  if (curve.empty()) throw ContractError("empty training curve");
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    if (curve[i].val.accuracy > curve[best].val.accuracy) best = i;
  }
  return static_cast<int>(best);
}

RunResult train_run(const TrainConfig& config, std::span<const data::ConnectomeGraph> graphs, int num_classes,
                    const data::DatasetSplits& splits, std::uint64_t seed) {
  config.validate();
  if (graphs.empty()) throw ContractError("dataset has no graphs");
  const std::size_t input_dim = graphs.front().d;
  auto model = models::make_model(config.model, input_dim, static_cast<std::size_t>(num_classes),
                                  derive_seed(seed, "init"));
  const auto prepared = prepare_graphs(*model, graphs, seed);

  RunResult r;
  r.seed = seed;
  for (const auto& g : graphs) r.edges_after_drop += g.edges.size();
  ad::AdamState optimizer;
  r.curve.reserve(static_cast<std::size_t>(config.total_epochs));
  for (int e = 0; e < config.total_epochs; ++e) {
    r.curve.push_back(train_epoch(*model, optimizer, prepared, splits, config, e, seed));
  }
  r.best_val_epoch = best_val_epoch(r.curve);
  const auto& best = r.curve[static_cast<std::size_t>(r.best_val_epoch)];
  r.best_val_accuracy = best.val.accuracy;
  r.test_at_best_val = best.test.accuracy;
  return r;
}

}  // namespace connectome::training
