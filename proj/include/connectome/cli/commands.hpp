// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "connectome/cli/sweep_options.hpp"
#include "connectome/data/synthetic.hpp"
#include "connectome/models/model.hpp"
#include "connectome/training/experiment.hpp"
#include "json.hpp"

namespace connectome::cli {

struct GenDataSummary {
  std::size_t graphs = 0;
  int classes = 0;
  double mean_edge_density = 0.0;
};

/// Writes the dataset to `out` and a one-line summary to `log`.
GenDataSummary cmd_gen_data(const data::SyntheticSpec& spec, const std::filesystem::path& out, std::ostream& log);

struct DropEdgeRow {
  std::string dataset;
  double p = 0.0;
  models::ModelKind model = models::ModelKind::residual_gcn;
  training::Summary test;
};

struct DropoutCell {
  double dropout = 0.0;
  double attention_dropout = 0.0;
  training::Summary val;
  training::Summary test;
};

struct LayerRow {
  std::size_t layers = 0;
  training::Summary val;
  training::Summary test;
};

struct VariantRow {
  std::string placement;  // "none" for the plain ResidualGCN baseline
  double probability = 0.0;
  training::Summary val;
  training::Summary test;
  std::vector<training::RunResult> runs;
};

/// Every (model, p) pair; writes dropedge.csv, dropedge.md and runs/*.json under the output directory.
std::vector<DropEdgeRow> cmd_sweep_dropedge(const SweepSpec& sweep, std::ostream& log);
/// Network dropout x attention dropout for the first model; writes dropout_val.csv and dropout_test.csv.
std::vector<DropoutCell> cmd_sweep_dropout(const SweepSpec& sweep, std::ostream& log);
/// One row per layer count for the first model; writes layers.csv.
std::vector<LayerRow> cmd_sweep_layers(const SweepSpec& sweep, std::ostream& log);
/// Plain ResidualGCN baseline plus each attention variant; writes variants.csv.
std::vector<VariantRow> cmd_sweep_variants(const SweepSpec& sweep, std::ostream& log);

struct CurvesSummary {
  std::size_t rows = 0;
  double final_train = 0.0;
  double final_test = 0.0;
  double gap = 0.0;  // final train accuracy minus final test accuracy
};

/// Reads a run record, picks the run for `seed` (first run when unset) and writes its curves as CSV.
/// Throws LookupError when the file or seed does not exist.
CurvesSummary cmd_curves(const std::filesystem::path& run_json, std::optional<std::uint64_t> seed,
                         const std::filesystem::path& out_csv, std::ostream& log);

/// Run record: the experiment plus config hash, seeds and dataset content hash.
nlohmann::ordered_json run_record(const std::string& command, const LoadedDataset& dataset,
                                  const training::TrainConfig& config, const training::ExperimentResult& result);

}  // namespace connectome::cli
