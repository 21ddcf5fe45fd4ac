// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "connectome/models/attention.hpp"
#include "connectome/models/residual_gcn.hpp"

namespace connectome::models {

/// ResidualGCN's parameters (same names, same initial values for a given
/// seed) plus the inserted attention blocks.
struct AttnResidualGCNParams {
  ResidualGCNParams base;
  std::vector<AttentionParams> attention;  // one per GCN layer, or one after concat

  static AttnResidualGCNParams create(ad::ParamStore& store, const ResidualGCNConfig& config,
                                      const AttnVariantConfig& variant, std::size_t input_dim,
                                      std::size_t num_classes, std::uint64_t init_seed);
};

/// Whether this forward inserts attention: a seeded Bernoulli draw in train
/// mode, `apply_probability > 0` in eval mode.
bool attention_applies(const AttnVariantConfig& variant, const ForwardContext& ctx);

/// ResidualGCN with a sparse attention block (over local edges plus
/// self-loops) after every GCN layer or after the concatenation.
ad::Tensor attn_residual_gcn_forward(ad::Tape& tape, const PreparedGraph& g, const AttnResidualGCNParams& params,
                                     const ResidualGCNConfig& config, const AttnVariantConfig& variant,
                                     ForwardContext& ctx);

class AttnResidualGCN : public Model {
 public:
  AttnResidualGCN(const ResidualGCNConfig& config, const AttnVariantConfig& variant, std::size_t input_dim,
                  std::size_t num_classes, std::uint64_t init_seed);

  ModelKind kind() const noexcept override { return ModelKind::attn_residual_gcn; }
  PreparedGraph prepare(const data::ConnectomeGraph& g, std::uint64_t structure_seed) const override;
  ad::Tensor forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const override;
  nlohmann::ordered_json config_json() const override;

 private:
  ResidualGCNConfig config_;
  AttnVariantConfig variant_;
  AttnResidualGCNParams handles_;
};

}  // namespace connectome::models
