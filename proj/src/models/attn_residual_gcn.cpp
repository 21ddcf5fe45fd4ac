// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/attn_residual_gcn.hpp"

#include <string>

namespace connectome::models {

namespace {

AttentionConfig attention_config(const ResidualGCNConfig& config, const AttnVariantConfig& variant) {
  const std::size_t width = variant.placement == AttnPlacement::after_concat
                                ? config.hidden_dim * config.num_gcn_layers
                                : config.hidden_dim;
  return {width, variant.num_heads, config.dropout, variant.attention_dropout, 2};
}

}  // namespace

AttnResidualGCNParams AttnResidualGCNParams::create(ad::ParamStore& store, const ResidualGCNConfig& config,
                                                    const AttnVariantConfig& variant, std::size_t input_dim,
                                                    std::size_t num_classes, std::uint64_t init_seed) {
  AttnResidualGCNParams p;
  p.base = ResidualGCNParams::create(store, config, input_dim, num_classes, init_seed);
  const auto attn = attention_config(config, variant);
  if (variant.placement == AttnPlacement::after_each_gcn) {
    for (std::size_t i = 0; i < config.num_gcn_layers; ++i) {
      p.attention.push_back(AttentionParams::create(store, "attn." + std::to_string(i), attn, init_seed));
    }
  } else {
    p.attention.push_back(AttentionParams::create(store, "attn.concat", attn, init_seed));
  }
  return p;
}

bool attention_applies(const AttnVariantConfig& variant, const ForwardContext& ctx) {
  if (variant.apply_probability <= 0.0) return false;
  if (ctx.mode == ad::Mode::eval || variant.apply_probability >= 1.0) return true;
  Rng rng(ctx.site_seed("attn.apply"));
  return uniform01(rng) < variant.apply_probability;
}

ad::Tensor attn_residual_gcn_forward(ad::Tape& tape, const PreparedGraph& g, const AttnResidualGCNParams& params,
                                     const ResidualGCNConfig& config, const AttnVariantConfig& variant,
                                     ForwardContext& ctx) {
  if (ctx.stats) ++ctx.stats->forwards;
  const bool apply = attention_applies(variant, ctx);
  const auto attn = attention_config(config, variant);
  const bool each = apply && variant.placement == AttnPlacement::after_each_gcn;

  std::vector<ad::Tensor> layers;
  ad::Tensor h = g.features;
  for (std::size_t i = 0; i < params.base.gcn_weights.size(); ++i) {
    h = gcn_layer(tape, g.propagation, h, params.base.gcn_weights[i]);
    if (each) {
      h = sparse_attention_layer(tape, g.interaction, h, params.attention[i], attn, ctx, "attn." + std::to_string(i))
              .output;
      if (ctx.stats) ++ctx.stats->attention_applications;
    }
    layers.push_back(h);
  }
  auto concatenated = ad::concat_cols(tape, layers);
  if (apply && variant.placement == AttnPlacement::after_concat) {
    concatenated =
        sparse_attention_layer(tape, g.interaction, concatenated, params.attention[0], attn, ctx, "attn.concat")
            .output;
    if (ctx.stats) ++ctx.stats->attention_applications;
  }
  return residual_gcn_head(tape, concatenated, params.base, config, ctx);
}

AttnResidualGCN::AttnResidualGCN(const ResidualGCNConfig& config, const AttnVariantConfig& variant,
                                 std::size_t input_dim, std::size_t num_classes, std::uint64_t init_seed)
    : Model(input_dim, num_classes), config_(config), variant_(variant) {
  ModelSpec spec{ModelKind::attn_residual_gcn, config_, {}, variant_};
  spec.validate();
  handles_ = AttnResidualGCNParams::create(params_, config_, variant_, input_dim, num_classes, init_seed);
}

PreparedGraph AttnResidualGCN::prepare(const data::ConnectomeGraph& g, std::uint64_t) const {
  PreparedGraph p;
  p.num_nodes = g.n;
  p.label = g.label;
  p.features = node_features(g);
  p.propagation = normalized_adjacency(g, config_.use_edge_weights);
  p.interaction = build_local_interaction_graph(g);
  return p;
}

ad::Tensor AttnResidualGCN::forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const {
  check_input(g, input_dim_);
  return attn_residual_gcn_forward(tape, g, handles_, config_, variant_, ctx);
}

nlohmann::ordered_json AttnResidualGCN::config_json() const {
  ModelSpec spec{ModelKind::attn_residual_gcn, config_, {}, variant_};
  return spec.to_json();
}

}  // namespace connectome::models
