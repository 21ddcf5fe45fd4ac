// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/exphormer.hpp"

#include <cmath>
#include <string>

namespace connectome::models {

ExphormerParams ExphormerParams::create(ad::ParamStore& store, const ExphormerConfig& config,
                                        std::size_t feature_dim, std::size_t num_classes, std::uint64_t init_seed) {
  ExphormerParams p;
  const std::size_t d = config.hidden_dim;
  p.input_weight = store.add_glorot("input.weight", feature_dim, d, init_seed);
  p.input_bias = store.add_constant("input.bias", 1, d, 0.0);
  if (config.num_global_nodes > 0) {
    p.global_embedding = store.add_glorot("global.embedding", config.num_global_nodes, d, init_seed);
  }
  const AttentionConfig attn{d, config.num_heads, config.dropout, config.attention_dropout, 2};
  for (std::size_t i = 0; i < config.num_layers; ++i) {
    p.layers.push_back(AttentionParams::create(store, "layers." + std::to_string(i), attn, init_seed));
  }
  p.head1_weight = store.add_glorot("head.0.weight", d, d, init_seed);
  p.head1_bias = store.add_constant("head.0.bias", 1, d, 0.0);
  p.head2_weight = store.add_glorot("head.1.weight", d, num_classes, init_seed);
  p.head2_bias = store.add_constant("head.1.bias", 1, num_classes, 0.0);
  return p;
}

ad::Tensor degree_encoded_features(const data::ConnectomeGraph& g) {
  std::vector<double> degree(g.n, 0.0);
  for (const auto& e : g.edges) {
    degree[e.u] += 1.0;
    degree[e.v] += 1.0;
  }
  const std::size_t cols = g.d + 1;
  std::vector<double> values(g.n * cols);
  for (std::size_t v = 0; v < g.n; ++v) {
    for (std::size_t j = 0; j < g.d; ++j) values[v * cols + j] = g.x[v * g.d + j];
    values[v * cols + g.d] = std::log1p(degree[v]);
  }
  return ad::Tensor(g.n, cols, std::move(values));
}

ad::Tensor exphormer_forward(ad::Tape& tape, const PreparedGraph& g, const ExphormerParams& params,
                             const ExphormerConfig& config, ForwardContext& ctx) {
  if (ctx.stats) ++ctx.stats->forwards;
  const AttentionConfig attn{config.hidden_dim, config.num_heads, config.dropout, config.attention_dropout, 2};

  auto h = ad::add_row(tape, ad::matmul(tape, g.features, params.input_weight), params.input_bias);
  if (config.num_global_nodes > 0) h = ad::concat_rows(tape, h, params.global_embedding);
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    h = sparse_attention_layer(tape, g.interaction, h, params.layers[i], attn, ctx, "layers." + std::to_string(i))
            .output;
  }
  if (config.num_global_nodes > 0) h = ad::slice_rows(tape, h, 0, g.num_nodes);
  auto pooled = ad::mean_pool_rows(tape, h);
  auto hidden = ad::relu(tape, ad::add_row(tape, ad::matmul(tape, pooled, params.head1_weight), params.head1_bias));
  hidden = ad::dropout(tape, hidden, config.dropout, ctx.mode, ctx.site_seed("head.dropout"));
  return ad::add_row(tape, ad::matmul(tape, hidden, params.head2_weight), params.head2_bias);
}

Exphormer::Exphormer(const ExphormerConfig& config, std::size_t input_dim, std::size_t num_classes,
                     std::uint64_t init_seed)
    : Model(input_dim, num_classes), config_(config) {
  config_.validate();
  const std::size_t feature_dim = input_dim + (config_.structural_encoding == StructuralEncoding::degree ? 1 : 0);
  handles_ = ExphormerParams::create(params_, config_, feature_dim, num_classes, init_seed);
}

AttentionConfig Exphormer::attention_config() const noexcept {
  return {config_.hidden_dim, config_.num_heads, config_.dropout, config_.attention_dropout, 2};
}

PreparedGraph Exphormer::prepare(const data::ConnectomeGraph& g, std::uint64_t structure_seed) const {
  PreparedGraph p;
  p.num_nodes = g.n;
  p.label = g.label;
  p.features = config_.structural_encoding == StructuralEncoding::degree ? degree_encoded_features(g)
                                                                           : node_features(g);
  p.interaction = build_interaction_graph(g, config_.expander_degree, config_.num_global_nodes, structure_seed);
  return p;
}

ad::Tensor Exphormer::forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const {
  check_input(g, handles_.input_weight.rows());
  return exphormer_forward(tape, g, handles_, config_, ctx);
}

nlohmann::ordered_json Exphormer::config_json() const {
  ModelSpec spec;
  spec.kind = ModelKind::exphormer;
  spec.exphormer = config_;
  return spec.to_json();
}

}  // namespace connectome::models
