// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/attention.hpp"

#include <cmath>

#include "connectome/common/errors.hpp"

namespace connectome::models {

AttentionParams AttentionParams::create(ad::ParamStore& store, const std::string& prefix,
                                        const AttentionConfig& config, std::uint64_t init_seed) {
  const std::size_t d = config.dim;
  const std::size_t f = config.dim * config.ffn_multiplier;
  AttentionParams p;
  p.query = store.add_glorot(prefix + ".query", d, d, init_seed);
  p.key = store.add_glorot(prefix + ".key", d, d, init_seed);
  p.value = store.add_glorot(prefix + ".value", d, d, init_seed);
  p.out_weight = store.add_glorot(prefix + ".out.weight", d, d, init_seed);
  p.out_bias = store.add_constant(prefix + ".out.bias", 1, d, 0.0);
  p.norm1_gain = store.add_constant(prefix + ".norm1.gain", 1, d, 1.0);
  p.norm1_bias = store.add_constant(prefix + ".norm1.bias", 1, d, 0.0);
  p.ffn1_weight = store.add_glorot(prefix + ".ffn1.weight", d, f, init_seed);
  p.ffn1_bias = store.add_constant(prefix + ".ffn1.bias", 1, f, 0.0);
  p.ffn2_weight = store.add_glorot(prefix + ".ffn2.weight", f, d, init_seed);
  p.ffn2_bias = store.add_constant(prefix + ".ffn2.bias", 1, d, 0.0);
  p.norm2_gain = store.add_constant(prefix + ".norm2.gain", 1, d, 1.0);
  p.norm2_bias = store.add_constant(prefix + ".norm2.bias", 1, d, 0.0);
  return p;
}

AttentionOutput sparse_attention_layer(ad::Tape& tape, const InteractionGraph& graph, const ad::Tensor& h,
                                       const AttentionParams& params, const AttentionConfig& config,
                                       const ForwardContext& ctx, std::string_view site) {
  if (config.heads == 0 || config.dim % config.heads != 0) {
    throw DimensionError("attention width " + std::to_string(config.dim) + " not divisible by " +
                         std::to_string(config.heads) + " heads");
  }
  if (h.cols() != config.dim || h.rows() != graph.num_nodes()) {
    throw DimensionError("attention input " + ad::to_string(h.shape()) + " for " +
                         std::to_string(graph.num_nodes()) + " nodes of width " + std::to_string(config.dim));
  }
  const std::string s(site);
  const double score_scale = 1.0 / std::sqrt(static_cast<double>(config.dim / config.heads));

  auto q = ad::matmul(tape, h, params.query);
  auto k = ad::matmul(tape, h, params.key);
  auto v = ad::matmul(tape, h, params.value);
  auto scores = ad::edge_scores(tape, q, k, graph.edges, config.heads, score_scale);
  auto weights = ad::softmax_segments(tape, scores, graph.destinations, graph.num_nodes());
  auto dropped = ad::dropout(tape, weights, config.attention_dropout, ctx.mode, ctx.site_seed(s + ".attn_dropout"));
  auto mixed = ad::attention_aggregate(tape, dropped, v, graph.edges, config.heads, graph.num_nodes());

  auto projected = ad::add_row(tape, ad::matmul(tape, mixed, params.out_weight), params.out_bias);
  projected = ad::dropout(tape, projected, config.dropout, ctx.mode, ctx.site_seed(s + ".out_dropout"));
  auto h1 = ad::layer_norm(tape, ad::add(tape, h, projected), params.norm1_gain, params.norm1_bias);

  auto ff = ad::relu(tape, ad::add_row(tape, ad::matmul(tape, h1, params.ffn1_weight), params.ffn1_bias));
  ff = ad::dropout(tape, ff, config.dropout, ctx.mode, ctx.site_seed(s + ".ffn_dropout"));
  ff = ad::add_row(tape, ad::matmul(tape, ff, params.ffn2_weight), params.ffn2_bias);
  ff = ad::dropout(tape, ff, config.dropout, ctx.mode, ctx.site_seed(s + ".ffn_out_dropout"));
  auto h2 = ad::layer_norm(tape, ad::add(tape, h1, ff), params.norm2_gain, params.norm2_bias);
  return {h2, weights};
}

}  // namespace connectome::models
