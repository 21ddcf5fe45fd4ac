// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "connectome/autodiff/param_store.hpp"
#include "connectome/data/connectome_graph.hpp"
#include "connectome/models/forward_context.hpp"
#include "connectome/models/gcn.hpp"
#include "connectome/models/interaction_graph.hpp"
#include "json.hpp"

namespace connectome::models {

enum class ModelKind { residual_gcn, exphormer, attn_residual_gcn };

/// CLI spelling: "residual-gcn", "exphormer", "attn-residual-gcn".
std::string to_string(ModelKind kind);
/// Accepts both the CLI spelling and the underscore form.
ModelKind parse_model_kind(std::string_view text);

struct ResidualGCNConfig {
  std::size_t num_gcn_layers = 3;
  std::size_t hidden_dim = 64;
  std::size_t mlp_hidden = 64;
  double dropout = 0.1;
  bool use_edge_weights = true;

  void validate() const;
};

enum class StructuralEncoding { none, degree };

struct ExphormerConfig {
  std::size_t num_layers = 2;
  std::size_t num_heads = 4;
  std::size_t hidden_dim = 64;
  double dropout = 0.1;
  double attention_dropout = 0.3;
  std::size_t expander_degree = 4;
  std::size_t num_global_nodes = 1;
  StructuralEncoding structural_encoding = StructuralEncoding::degree;

  void validate() const;
};

enum class AttnPlacement { after_each_gcn, after_concat };

std::string to_string(AttnPlacement placement);
AttnPlacement parse_attn_placement(std::string_view text);

/// Attention inserted into ResidualGCN, applied per training forward with
/// `apply_probability`.
struct AttnVariantConfig {
  AttnPlacement placement = AttnPlacement::after_concat;
  double apply_probability = 1.0;
  std::size_t num_heads = 4;
  double attention_dropout = 0.3;

  void validate() const;
};

struct ModelSpec {
  ModelKind kind = ModelKind::residual_gcn;
  ResidualGCNConfig gcn;
  ExphormerConfig exphormer;
  AttnVariantConfig variant;

  void validate() const;
  /// Only the sections the model kind uses are emitted.
  nlohmann::ordered_json to_json() const;
  static ModelSpec from_json(const nlohmann::json& j);
};

/// Per-graph inputs derived once before training: the (possibly
/// structure-augmented) feature matrix and the propagation structure the
/// model attends or convolves over.
struct PreparedGraph {
  std::size_t num_nodes = 0;
  int label = 0;
  ad::Tensor features;
  Propagation propagation;
  InteractionGraph interaction;
};

/// A graph classifier. Parameters are read-only during forward; only the
/// optimizer mutates them.
class Model {
 public:
  Model(std::size_t input_dim, std::size_t num_classes) : input_dim_(input_dim), num_classes_(num_classes) {}
  virtual ~Model() = default;

  virtual ModelKind kind() const noexcept = 0;
  /// Builds the structures forward needs; `structure_seed` drives any random
  /// structure (expander edges).
  virtual PreparedGraph prepare(const data::ConnectomeGraph& g, std::uint64_t structure_seed) const = 0;
  /// Logits [1 x num_classes].
  virtual ad::Tensor forward(ad::Tape& tape, const PreparedGraph& g, ForwardContext& ctx) const = 0;
  virtual nlohmann::ordered_json config_json() const = 0;

  ad::ParamStore& params() noexcept { return params_; }
  const ad::ParamStore& params() const noexcept { return params_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t num_classes() const noexcept { return num_classes_; }

 protected:
  void check_input(const PreparedGraph& g, std::size_t expected_cols) const;

  ad::ParamStore params_;
  std::size_t input_dim_;
  std::size_t num_classes_;
};

std::unique_ptr<Model> make_model(const ModelSpec& spec, std::size_t input_dim, std::size_t num_classes,
                                  std::uint64_t init_seed);

}  // namespace connectome::models
