// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

// Finite-difference gradient checks shared by the unit tests and the
// acceptance run.

#pragma once

#include <algorithm>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "connectome/autodiff/ops.hpp"
#include "connectome/models/model.hpp"
#include "oracles.hpp"

namespace connectome::testing {

struct NamedCheck {
  std::string name;
  GradCheck check;
};

/// Central-difference checks of every differentiable op on one random
/// instance; `instance` seeds the shapes and values.
inline std::vector<NamedCheck> op_gradient_checks(int instance) {
  using namespace ad;
  std::vector<NamedCheck> out;
  std::mt19937_64 rng(100 + static_cast<std::uint64_t>(instance));
  std::uniform_int_distribution<std::size_t> dim(2, 5);
  const std::size_t r = dim(rng);
  const std::size_t c = dim(rng);
  const std::size_t k = dim(rng);

  auto a = random_tensor(r, c, rng);
  auto b = random_tensor(r, c, rng);
  auto m = random_tensor(c, k, rng);
  auto bias = random_tensor(1, c, rng);
  // Keep relu inputs away from the kink.
  auto away = random_tensor(r, c, rng);
  for (double& v : away.mutable_values()) v = v < 0 ? v - 0.1 : v + 0.1;

  out.push_back({"matmul", check_gradients([&](Tape& t) { return project(t, matmul(t, a, m), 1); }, {a, m})});
  out.push_back({"add", check_gradients([&](Tape& t) { return project(t, add(t, a, b), 2); }, {a, b})});
  out.push_back({"add_row", check_gradients([&](Tape& t) { return project(t, add_row(t, a, bias), 3); }, {a, bias})});
  out.push_back({"scale", check_gradients([&](Tape& t) { return project(t, scale(t, a, -1.7), 4); }, {a})});
  out.push_back({"relu", check_gradients([&](Tape& t) { return project(t, relu(t, away), 5); }, {away})});
  out.push_back({"sum", check_gradients([&](Tape& t) { return sum(t, a); }, {a})});
  out.push_back({"concat_cols", check_gradients(
                                    [&](Tape& t) {
                                      const std::vector<Tensor> parts{a, b};
                                      return project(t, concat_cols(t, parts), 6);
                                    },
                                    {a, b})});
  out.push_back({"concat_rows", check_gradients([&](Tape& t) { return project(t, concat_rows(t, a, b), 7); }, {a, b})});
  out.push_back({"slice_rows", check_gradients([&](Tape& t) { return project(t, slice_rows(t, a, 1, r), 8); }, {a})});
  out.push_back({"mean_pool_rows", check_gradients([&](Tape& t) { return project(t, mean_pool_rows(t, a), 9); }, {a})});
  out.push_back(
      {"dropout", check_gradients([&](Tape& t) { return project(t, dropout(t, a, 0.4, Mode::train, 11), 10); }, {a})});

  auto gain = random_tensor(1, c, rng, true, 0.5, 1.5);
  auto beta = random_tensor(1, c, rng);
  auto ln_in = random_tensor(r, c, rng, true, -2.0, 2.0);
  out.push_back(
      {"layer_norm", check_gradients([&](Tape& t) { return project(t, layer_norm(t, ln_in, gain, beta), 12); },
                                     {ln_in, gain, beta})});

  // Attention primitives on a random directed edge set with self loops.
  const std::size_t n = r + 1;
  const std::size_t heads = 2;
  const std::size_t width = 2 * c;
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(0.5);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = 0; v < n; ++v) {
      if (u == v || coin(rng)) edges.push_back({u, v});
    }
  }
  std::sort(edges.begin(), edges.end(), [](Edge x, Edge y) { return std::tie(x.dst, x.src) < std::tie(y.dst, y.src); });
  std::vector<std::uint32_t> seg;
  for (auto e : edges) seg.push_back(e.dst);
  auto q = random_tensor(n, width, rng);
  auto kk = random_tensor(n, width, rng);
  auto v = random_tensor(n, width, rng);
  auto scores = random_tensor(edges.size(), heads, rng, true, -2.0, 2.0);
  auto weights = random_tensor(edges.size(), heads, rng);
  const std::vector<double> ew(edges.size(), 0.7);

  out.push_back({"sparse_aggregate",
                 check_gradients([&](Tape& t) { return project(t, sparse_aggregate(t, edges, ew, v), 13); }, {v})});
  out.push_back(
      {"softmax_segments",
       check_gradients([&](Tape& t) { return project(t, softmax_segments(t, scores, seg, n), 14); }, {scores})});
  out.push_back(
      {"edge_scores",
       check_gradients([&](Tape& t) { return project(t, edge_scores(t, q, kk, edges, heads, 0.5), 15); }, {q, kk})});
  out.push_back(
      {"attention_aggregate",
       check_gradients([&](Tape& t) { return project(t, attention_aggregate(t, weights, v, edges, heads, n), 16); },
                       {weights, v})});
  const std::vector<int> labels(r, static_cast<int>(instance % static_cast<int>(c)));
  out.push_back({"cross_entropy", check_gradients([&](Tape& t) { return cross_entropy(t, a, labels); }, {a})});
  return out;
}

/// Full forward plus cross-entropy for each model kind on one random 6-node
/// graph, checked against every parameter. Train mode with a fixed forward
/// seed, so dropout masks are part of the checked function.
inline std::vector<NamedCheck> model_gradient_checks(int instance) {
  std::mt19937_64 rng(200 + static_cast<std::uint64_t>(instance));
  const auto g = random_graph(6, 3, 0.4, rng, instance % 2);
  const int label = g.label;

  std::vector<std::pair<std::string, models::ModelSpec>> specs;
  models::ModelSpec gcn;
  gcn.kind = models::ModelKind::residual_gcn;
  gcn.gcn.num_gcn_layers = 2;
  gcn.gcn.hidden_dim = 4;
  gcn.gcn.mlp_hidden = 4;
  specs.push_back({"residual_gcn", gcn});

  models::ModelSpec exphormer;
  exphormer.kind = models::ModelKind::exphormer;
  exphormer.exphormer.num_layers = 2;
  exphormer.exphormer.num_heads = 2;
  exphormer.exphormer.hidden_dim = 4;
  exphormer.exphormer.expander_degree = 2;
  specs.push_back({"exphormer", exphormer});

  for (auto placement : {models::AttnPlacement::after_each_gcn, models::AttnPlacement::after_concat}) {
    models::ModelSpec variant = gcn;
    variant.kind = models::ModelKind::attn_residual_gcn;
    variant.variant.placement = placement;
    variant.variant.apply_probability = 1.0;
    variant.variant.num_heads = 2;
    specs.push_back({"attn_residual_gcn/" + models::to_string(placement), variant});
  }

  std::vector<NamedCheck> out;
  for (const auto& [name, spec] : specs) {
    auto model = models::make_model(spec, 3, 2, 300 + static_cast<std::uint64_t>(instance));
    // Zero biases and unit gains put whole rows exactly on ReLU kinks; jitter to a generic point.
    std::uniform_real_distribution<double> jitter(-0.2, 0.2);
    for (auto t : model->params().tensors()) {
      for (auto& value : t.mutable_values()) value += jitter(rng);
    }
    const auto prepared = model->prepare(g, static_cast<std::uint64_t>(instance));
    auto check = check_gradients(
        [&](ad::Tape& tape) {
          models::ForwardContext ctx{ad::Mode::train, 400 + static_cast<std::uint64_t>(instance), nullptr};
          return ad::cross_entropy(tape, model->forward(tape, prepared, ctx), std::span(&label, 1));
        },
        model->params().tensors());
    out.push_back({name, check});
  }
  return out;
}

}  // namespace connectome::testing
