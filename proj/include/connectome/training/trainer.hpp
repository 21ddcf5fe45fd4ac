// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "connectome/autodiff/adam.hpp"
#include "connectome/data/connectome_graph.hpp"
#include "connectome/data/splits.hpp"
#include "connectome/models/model.hpp"
#include "connectome/training/schedule.hpp"

namespace connectome::training {

struct SplitMetrics {
  double accuracy = 0.0;  // percent
  double loss = 0.0;      // mean cross-entropy

  bool operator==(const SplitMetrics&) const = default;
};

struct EpochMetrics {
  int epoch = 0;
  double lr = 0.0;
  double train_loss = 0.0;  // mean loss of the training forwards (train mode)
  SplitMetrics train;
  SplitMetrics val;
  SplitMetrics test;

  bool operator==(const EpochMetrics&) const = default;
};

struct RunResult {
  std::uint64_t seed = 0;
  double drop_probability = 0.0;
  std::size_t edges_after_drop = 0;
  std::vector<EpochMetrics> curve;
  int best_val_epoch = 0;
  double best_val_accuracy = 0.0;
  double test_at_best_val = 0.0;

  bool operator==(const RunResult&) const = default;
};

/// Prepares every graph once; graph i gets structure seed derive(run_seed, "structure", i).
std::vector<models::PreparedGraph> prepare_graphs(const models::Model& model,
                                                  std::span<const data::ConnectomeGraph> graphs,
                                                  std::uint64_t run_seed);

/// Eval-mode accuracy and loss over `indices`. Throws ContractError when empty.
SplitMetrics evaluate_split(const models::Model& model, std::span<const models::PreparedGraph> graphs,
                            std::span<const std::size_t> indices);

/// Percent of `indices` whose argmax logit (lowest index on ties) equals the label.
double evaluate(const models::Model& model, std::span<const models::PreparedGraph> graphs,
                std::span<const std::size_t> indices);

/// One pass over the shuffled training split with one Adam step per mini-batch.
/// Throws DivergenceError on a non-finite loss.
EpochMetrics train_epoch(models::Model& model, ad::AdamState& optimizer,
                         std::span<const models::PreparedGraph> graphs, const data::DatasetSplits& splits,
                         const TrainConfig& config, int epoch, std::uint64_t run_seed);

/// Index of the first epoch with the highest validation accuracy.
int best_val_epoch(std::span<const EpochMetrics> curve);

/// Full schedule for one seed on `graphs` (already edge-dropped).
RunResult train_run(const TrainConfig& config, std::span<const data::ConnectomeGraph> graphs, int num_classes,
                    const data::DatasetSplits& splits, std::uint64_t seed);

}  // namespace connectome::training
