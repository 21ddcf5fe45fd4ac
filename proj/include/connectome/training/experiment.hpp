// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "connectome/data/connectome_graph.hpp"
#include "connectome/training/schedule.hpp"
#include "connectome/training/trainer.hpp"

namespace connectome::training {

struct Summary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single value

  bool operator==(const Summary&) const = default;
};

Summary summarize(std::span<const double> values);

struct ExperimentResult {
  double drop_probability = 0.0;
  std::vector<RunResult> runs;  // one per seed, in config order
  Summary test;                 // test accuracy at the best-validation epoch
  Summary val;                  // best validation accuracy

  bool operator==(const ExperimentResult&) const = default;
};

/// Copy of `dataset` with graph i's edges dropped using stream derive(seed, "drop-edges", i).
std::vector<data::ConnectomeGraph> dropped_graphs(const data::Dataset& dataset, double drop_p, std::uint64_t seed);

/// Trains every seed of `config` on its own edge-dropped copy and aggregates.
/// Seeds run on up to `workers` threads (0 = hardware concurrency).
ExperimentResult run_experiment(const TrainConfig& config, const data::Dataset& dataset, double drop_p,
                                std::size_t workers = 1);

}  // namespace connectome::training
