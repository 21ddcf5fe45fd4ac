// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "connectome/models/model.hpp"

namespace connectome::models {

/// Parameter handles: one weight per GCN layer plus a 2-layer MLP head.
struct ResidualGCNParams {
  std::vector<ad::Tensor> gcn_weights;
  ad::Tensor mlp1_weight, mlp1_bias, mlp2_weight, mlp2_bias;

  static ResidualGCNParams create(ad::ParamStore& store, const ResidualGCNConfig& config, std::size_t input_dim,
                                  std::size_t num_classes, std::uint64_t init_seed);
};

/// Outputs of every GCN layer, h_1 .. h_L with h_0 = features.
std::vector<ad::Tensor> gcn_stack(ad::Tape& tape, const PreparedGraph& g, const ResidualGCNParams& params);

/// concat -> mean pool -> Linear -> ReLU -> dropout -> Linear.
ad::Tensor residual_gcn_head(ad::Tape& tape, const ad::Tensor& concatenated, const ResidualGCNParams& params,
                             const ResidualGCNConfig& config, const ForwardContext& ctx);

ad::Tensor residual_gcn_forward(ad::Tape& tape, const PreparedGraph& g, const ResidualGCNParams& params,
                                const ResidualGCNConfig& config, ForwardContext& ctx);

class ResidualGCN : public Model {
 public:
  ResidualGCN(const ResidualGCNConfig& config, std::size_t input_dim, std::size_t num_classes,
              std::uint64_t init_seed);

  ModelKind kind() const noexcept override { return ModelKind::residual_gcn; }
  PreparedGraph prepare(const data::ConnectomeGraph& g, std::uint64_t structure_seed) const override;
  ad::Tensor forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const override;
  nlohmann::ordered_json config_json() const override;

  const ResidualGCNConfig& config() const noexcept { return config_; }

 private:
  ResidualGCNConfig config_;
  ResidualGCNParams handles_;
};

}  // namespace connectome::models
