// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "connectome/data/connectome_graph.hpp"
#include "json.hpp"

namespace connectome::data {

/// Where the class signal of a synthetic dataset lives.
///  - feature_only: a class-specific shift on the feature rows of a fixed node
///    subset; community structure is drawn independently of the class.
///  - structure_only: the class sets the number of planted communities (and
///    so edge density); features are replaced by class-independent noise.
///  - mixed: both signals.
enum class LabelMode { feature_only, structure_only, mixed };

std::string to_string(LabelMode mode);
LabelMode parse_label_mode(std::string_view text);

struct SyntheticSpec {
  std::size_t num_graphs = 300;
  std::size_t n = 50;
  std::size_t d = 0;  // 0 selects d = n (full correlation rows)
  int num_classes = 2;
  double threshold = 0.5;
  LabelMode label_mode = LabelMode::feature_only;
  /// Std of each ROI's private noise relative to its community signal.
  double noise_scale = 0.5;
  /// Magnitude of the class shift added to feature rows (feature_only / mixed).
  double signal_strength = 0.5;
  std::uint64_t seed = 0;

  std::size_t feature_dim() const noexcept { return d == 0 ? n : d; }
  /// Throws ConfigError for invalid values.
  void validate() const;
};

nlohmann::ordered_json to_json(const SyntheticSpec& spec);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

/// Number of planted communities for a graph of class `label` in the
/// class-dependent modes.
std::size_t communities_for_class(int label, std::size_t n);

/// Generates spec.num_graphs graphs with labels i % num_classes. Graph i
/// uses its own stream derived from (spec.seed, i).
std::vector<ConnectomeGraph> generate_synthetic(const SyntheticSpec& spec);

/// generate_synthetic wrapped with the dataset header metadata.
Dataset make_synthetic_dataset(const SyntheticSpec& spec);

}  // namespace connectome::data
