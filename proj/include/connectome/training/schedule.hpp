// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "connectome/data/splits.hpp"
#include "connectome/models/model.hpp"
#include "json.hpp"

namespace connectome::training {

/// How the learning rate falls after warmup: subtract decay_per_epoch each
/// epoch (linear) or multiply by (1 - decay_per_epoch) (multiplicative).
enum class DecayRule { linear, multiplicative };

std::string to_string(DecayRule rule);
DecayRule parse_decay_rule(std::string_view text);

struct TrainConfig {
  double base_lr = 0.001;
  double decay_per_epoch = 1e-5;
  int total_epochs = 100;
  int warmup_epochs = 5;
  double lr_floor = 1e-6;
  DecayRule decay_rule = DecayRule::linear;
  std::size_t batch_size = 16;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  models::ModelSpec model;
  data::SplitRatios ratios;
  std::uint64_t split_seed = 0;

  /// Throws ConfigError.
  void validate() const;
  nlohmann::ordered_json to_json() const;
  static TrainConfig from_json(const nlohmann::json& j);
};

/// Linear warmup from base_lr / warmup to base_lr over [0, warmup), then
/// decay per `decay_rule`, never below min(lr_floor, base_lr).
/// Throws ContractError for epochs outside [0, total_epochs).
double lr_at(int epoch, const TrainConfig& config);

}  // namespace connectome::training
