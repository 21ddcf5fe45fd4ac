// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "connectome/autodiff/param_store.hpp"
#include "connectome/models/forward_context.hpp"
#include "connectome/models/interaction_graph.hpp"

namespace connectome::models {

struct AttentionConfig {
  std::size_t dim = 64;
  std::size_t heads = 4;
  double dropout = 0.1;
  double attention_dropout = 0.3;
  std::size_t ffn_multiplier = 2;
};

/// Handles to one transformer block's parameters inside a ParamStore.
struct AttentionParams {
  ad::Tensor query, key, value;
  ad::Tensor out_weight, out_bias;
  ad::Tensor norm1_gain, norm1_bias;
  ad::Tensor ffn1_weight, ffn1_bias, ffn2_weight, ffn2_bias;
  ad::Tensor norm2_gain, norm2_bias;

  /// Registers the block under "<prefix>.*".
  static AttentionParams create(ad::ParamStore& store, const std::string& prefix, const AttentionConfig& config,
                                std::uint64_t init_seed);
};

struct AttentionOutput {
  ad::Tensor output;   // [nodes x dim]
  ad::Tensor weights;  // [edges x heads], post-softmax and pre-dropout
};

/// One sparse transformer block over `graph`:
///   per head, softmax over in-edges of q_v . k_u / sqrt(dim / heads),
///   attention dropout, weighted sum of values, output projection, dropout,
///   residual + layer norm, 2-layer ReLU feed-forward with dropout,
///   residual + layer norm.
/// `site` names the block for dropout seeding.
AttentionOutput sparse_attention_layer(ad::Tape& tape, const InteractionGraph& graph, const ad::Tensor& h,
                                       const AttentionParams& params, const AttentionConfig& config,
                                       const ForwardContext& ctx, std::string_view site);

}  // namespace connectome::models
