// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/training/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "connectome/common/errors.hpp"
#include "connectome/common/json_keys.hpp"

namespace connectome::training {

std::string to_string(DecayRule rule) { return rule == DecayRule::linear ? "linear" : "multiplicative"; }

DecayRule parse_decay_rule(std::string_view text) {
  if (text == "linear") return DecayRule::linear;
  if (text == "multiplicative") return DecayRule::multiplicative;
  throw ConfigError("unknown decay rule '" + std::string(text) + "'");
}

void TrainConfig::validate() const {
  if (!(base_lr > 0.0)) throw ConfigError("base_lr must be positive");
  if (!(decay_per_epoch >= 0.0)) throw ConfigError("decay_per_epoch must be non-negative");
  if (decay_rule == DecayRule::multiplicative && decay_per_epoch >= 1.0) {
    throw ConfigError("multiplicative decay_per_epoch must be < 1");
  }
  if (total_epochs < 1) throw ConfigError("total_epochs must be >= 1");
  if (warmup_epochs < 0 || warmup_epochs >= total_epochs) {
    throw ConfigError("warmup_epochs must be in [0, total_epochs)");
  }
  if (!(lr_floor > 0.0)) throw ConfigError("lr_floor must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  model.validate();
}

nlohmann::ordered_json TrainConfig::to_json() const {
  nlohmann::ordered_json j;
  j["base_lr"] = base_lr;
  j["decay_per_epoch"] = decay_per_epoch;
  j["decay_rule"] = to_string(decay_rule);
  j["total_epochs"] = total_epochs;
  j["warmup_epochs"] = warmup_epochs;
  j["lr_floor"] = lr_floor;
  j["batch_size"] = batch_size;
  j["seeds"] = seeds;
  j["split"] = {{"train", ratios.train}, {"val", ratios.val}, {"test", ratios.test}, {"seed", split_seed}};
  j["model"] = model.to_json();
  return j;
}

TrainConfig TrainConfig::from_json(const nlohmann::json& j) {
  require_known_keys(j,
                     {"base_lr", "decay_per_epoch", "decay_rule", "total_epochs", "warmup_epochs", "lr_floor",
                      "batch_size", "seeds", "split", "model"},
                     "train config");
  TrainConfig c;
  try {
    c.base_lr = j.value("base_lr", c.base_lr);
    c.decay_per_epoch = j.value("decay_per_epoch", c.decay_per_epoch);
    if (j.contains("decay_rule")) c.decay_rule = parse_decay_rule(j.at("decay_rule").get<std::string>());
    c.total_epochs = j.value("total_epochs", c.total_epochs);
    c.warmup_epochs = j.value("warmup_epochs", c.warmup_epochs);
    c.lr_floor = j.value("lr_floor", c.lr_floor);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.seeds = j.value("seeds", c.seeds);
    if (j.contains("split")) {
      const auto& s = j.at("split");
      require_known_keys(s, {"train", "val", "test", "seed"}, "train.split");
      c.ratios.train = s.value("train", c.ratios.train);
      c.ratios.val = s.value("val", c.ratios.val);
      c.ratios.test = s.value("test", c.ratios.test);
      c.split_seed = s.value("seed", c.split_seed);
    }
    if (j.contains("model")) c.model = models::ModelSpec::from_json(j.at("model"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("train config: ") + e.what());
  }
  return c;
}

double lr_at(int epoch, const TrainConfig& config) {
  if (epoch < 0 || epoch >= config.total_epochs) {
    throw ContractError("epoch " + std::to_string(epoch) + " outside [0, " + std::to_string(config.total_epochs) +
                        ")");
  }
  if (epoch < config.warmup_epochs) {
    return config.base_lr * (static_cast<double>(epoch + 1) / static_cast<double>(config.warmup_epochs));
  }
  const double steps = static_cast<double>(epoch - config.warmup_epochs + 1);
  const double decayed = config.decay_rule == DecayRule::linear
                             ? config.base_lr - steps * config.decay_per_epoch
                             : config.base_lr * std::pow(1.0 - config.decay_per_epoch, steps);
  return std::max(decayed, std::min(config.lr_floor, config.base_lr));
}

}  // namespace connectome::training
