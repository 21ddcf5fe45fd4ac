// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "connectome/models/attention.hpp"
#include "connectome/models/model.hpp"

namespace connectome::models {

struct ExphormerParams {
  ad::Tensor input_weight, input_bias;
  ad::Tensor global_embedding;  // [num_global x hidden], empty when no global nodes
  std::vector<AttentionParams> layers;
  ad::Tensor head1_weight, head1_bias, head2_weight, head2_bias;

  /// `feature_dim` includes the structural-encoding column when enabled.
  static ExphormerParams create(ad::ParamStore& store, const ExphormerConfig& config, std::size_t feature_dim,
                                std::size_t num_classes, std::uint64_t init_seed);
};

/// Features with log(1 + degree) appended as a last column, degree counted
/// over the graph's (possibly dropped) local edges.
ad::Tensor degree_encoded_features(const data::ConnectomeGraph& g);

/// Input projection, global-node rows appended, num_layers sparse attention
/// blocks over the interaction graph, mean pool over real nodes, MLP head.
ad::Tensor exphormer_forward(ad::Tape& tape, const PreparedGraph& g, const ExphormerParams& params,
                             const ExphormerConfig& config, ForwardContext& ctx);

class Exphormer : public Model {
 public:
  Exphormer(const ExphormerConfig& config, std::size_t input_dim, std::size_t num_classes, std::uint64_t init_seed);

  ModelKind kind() const noexcept override { return ModelKind::exphormer; }
  PreparedGraph prepare(const data::ConnectomeGraph& g, std::uint64_t structure_seed) const override;
  ad::Tensor forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const override;
  nlohmann::ordered_json config_json() const override;

  const ExphormerConfig& config() const noexcept { return config_; }
  AttentionConfig attention_config() const noexcept;

 private:
  ExphormerConfig config_;
  ExphormerParams handles_;
};

}  // namespace connectome::models
