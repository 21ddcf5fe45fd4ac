// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/training/experiment.hpp"

#include <cmath>
#include <string>

#include "connectome/common/errors.hpp"
#include "connectome/common/parallel.hpp"
#include "connectome/common/random.hpp"
#include "connectome/data/edge_drop.hpp"
#include "connectome/data/splits.hpp"

namespace connectome::training {

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ContractError("cannot summarize an empty list");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<data::ConnectomeGraph> dropped_graphs(const data::Dataset& dataset, double drop_p, std::uint64_t seed) {
  std::vector<data::ConnectomeGraph> out;
  out.reserve(dataset.graphs.size());
  for (std::size_t i = 0; i < dataset.graphs.size(); ++i) {
    out.push_back(data::drop_edges(dataset.graphs[i], drop_p, derive_seed(seed, {fnv1a("drop-edges"), i})));
  }
  return out;
}

ExperimentResult run_experiment(const TrainConfig& config, const data::Dataset& dataset, double drop_p,
                                std::size_t workers) {
  config.validate();
  if (!(drop_p >= 0.0 && drop_p <= 1.0)) throw ConfigError("drop probability must be in [0, 1]");
  if (dataset.graphs.empty()) throw ContractError("dataset has no graphs");
  const auto splits = data::split(dataset, config.ratios, config.split_seed);

  ExperimentResult result;
  result.drop_probability = drop_p;
  result.runs.resize(config.seeds.size());
  parallel_for(config.seeds.size(), workers, [&](std::size_t s) {
    const auto seed = config.seeds[s];
    const auto graphs = dropped_graphs(dataset, drop_p, seed);
    RunResult run;
    try {
      run = train_run(config, graphs, dataset.num_classes, splits, seed);
    } catch (const DivergenceError& e) {
      throw DivergenceError(e.epoch(), e.batch(),
                            "seed " + std::to_string(seed) + ", drop_p " + std::to_string(drop_p));
    }
    run.drop_probability = drop_p;
    result.runs[s] = std::move(run);
  });

  std::vector<double> test;
  std::vector<double> val;
  for (const auto& r : result.runs) {
    test.push_back(r.test_at_best_val);
    val.push_back(r.best_val_accuracy);
  }
  result.test = summarize(test);
  result.val = summarize(val);
  return result;
}

}  // namespace connectome::training
