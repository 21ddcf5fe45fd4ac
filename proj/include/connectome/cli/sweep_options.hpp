// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "connectome/data/connectome_graph.hpp"
#include "connectome/data/synthetic.hpp"
#include "connectome/models/model.hpp"
#include "connectome/training/schedule.hpp"
#include "json.hpp"

namespace connectome::cli {

struct SweepSpec {
  std::optional<std::filesystem::path> dataset_path;
  std::optional<data::SyntheticSpec> synthetic;
  std::vector<models::ModelKind> models{models::ModelKind::residual_gcn};
  std::vector<double> drop_probabilities{0.0, 0.5, 1.0};
  std::vector<double> dropout_grid{0.1, 0.3};
  std::vector<double> attention_dropout_grid{0.1, 0.3, 0.5};
  std::vector<std::size_t> layer_counts{2, 3};
  std::vector<models::AttnVariantConfig> variants = default_variants();
  training::TrainConfig train;
  std::filesystem::path out_dir{"results"};
  std::size_t workers = 1;

  static std::vector<models::AttnVariantConfig> default_variants();

  /// Throws ConfigError.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  /// Keys absent from `j` keep the values already in `base`.
  static SweepSpec from_json(const nlohmann::json& j, SweepSpec base);
  static SweepSpec from_json(const nlohmann::json& j);
};

/// Reads a JSON config file. Throws IoError / ConfigError.
nlohmann::json read_config_file(const std::filesystem::path& path);

struct LoadedDataset {
  data::Dataset dataset;
  std::string name;
  std::string hash;  // git blob SHA-1 of the JSON-Lines bytes
};

/// Loads `dataset_path`, or generates `synthetic` in memory.
LoadedDataset resolve_dataset(const SweepSpec& spec);

/// Comma-separated list parsing shared by the CLI flags.
std::vector<double> parse_double_list(const std::string& text);
std::vector<std::size_t> parse_size_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);
std::vector<models::ModelKind> parse_model_list(const std::string& text);

}  // namespace connectome::cli
