// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/residual_gcn.hpp"

#include <string>

namespace connectome::models {

ResidualGCNParams ResidualGCNParams::create(ad::ParamStore& store, const ResidualGCNConfig& config,
                                            std::size_t input_dim, std::size_t num_classes,
                                            std::uint64_t init_seed) {
  ResidualGCNParams p;
  std::size_t in = input_dim;
  for (std::size_t i = 0; i < config.num_gcn_layers; ++i) {
    p.gcn_weights.push_back(
        store.add_glorot("gcn." + std::to_string(i) + ".weight", in, config.hidden_dim, init_seed));
    in = config.hidden_dim;
  }
  const std::size_t concat_dim = config.hidden_dim * config.num_gcn_layers;
  p.mlp1_weight = store.add_glorot("mlp.0.weight", concat_dim, config.mlp_hidden, init_seed);
  p.mlp1_bias = store.add_constant("mlp.0.bias", 1, config.mlp_hidden, 0.0);
  p.mlp2_weight = store.add_glorot("mlp.1.weight", config.mlp_hidden, num_classes, init_seed);
  p.mlp2_bias = store.add_constant("mlp.1.bias", 1, num_classes, 0.0);
  return p;
}

std::vector<ad::Tensor> gcn_stack(ad::Tape& tape, const PreparedGraph& g, const ResidualGCNParams& params) {
  std::vector<ad::Tensor> outputs;
  outputs.reserve(params.gcn_weights.size());
  ad::Tensor h = g.features;
  for (const auto& w : params.gcn_weights) {
    h = gcn_layer(tape, g.propagation, h, w);
    outputs.push_back(h);
  }
  return outputs;
}

ad::Tensor residual_gcn_head(ad::Tape& tape, const ad::Tensor& concatenated, const ResidualGCNParams& params,
                             const ResidualGCNConfig& config, const ForwardContext& ctx) {
  auto pooled = ad::mean_pool_rows(tape, concatenated);
  auto hidden = ad::relu(tape, ad::add_row(tape, ad::matmul(tape, pooled, params.mlp1_weight), params.mlp1_bias));
  hidden = ad::dropout(tape, hidden, config.dropout, ctx.mode, ctx.site_seed("mlp.dropout"));
  return ad::add_row(tape, ad::matmul(tape, hidden, params.mlp2_weight), params.mlp2_bias);
}

ad::Tensor residual_gcn_forward(ad::Tape& tape, const PreparedGraph& g, const ResidualGCNParams& params,
                                const ResidualGCNConfig& config, ForwardContext& ctx) {
  if (ctx.stats) ++ctx.stats->forwards;
  const auto layers = gcn_stack(tape, g, params);
  return residual_gcn_head(tape, ad::concat_cols(tape, layers), params, config, ctx);
}

ResidualGCN::ResidualGCN(const ResidualGCNConfig& config, std::size_t input_dim, std::size_t num_classes,
                         std::uint64_t init_seed)
    : Model(input_dim, num_classes), config_(config) {
  config_.validate();
  handles_ = ResidualGCNParams::create(params_, config_, input_dim, num_classes, init_seed);
}

PreparedGraph ResidualGCN::prepare(const data::ConnectomeGraph& g, std::uint64_t) const {
  PreparedGraph p;
  p.num_nodes = g.n;
  p.label = g.label;
  p.features = node_features(g);
  p.propagation = normalized_adjacency(g, config_.use_edge_weights);
  return p;
}

ad::Tensor ResidualGCN::forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const {
  check_input(g, input_dim_);
  return residual_gcn_forward(tape, g, handles_, config_, ctx);
}

nlohmann::ordered_json ResidualGCN::config_json() const {
  ModelSpec spec;
  spec.kind = ModelKind::residual_gcn;
  spec.gcn = config_;
  return spec.to_json();
}

}  // namespace connectome::models
