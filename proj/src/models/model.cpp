// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/model.hpp"

#include "connectome/common/errors.hpp"
#include "connectome/common/json_keys.hpp"
#include "connectome/models/attn_residual_gcn.hpp"
#include "connectome/models/exphormer.hpp"
#include "connectome/models/residual_gcn.hpp"

namespace connectome::models {

namespace {

void check_dropout(double rate, const char* name) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError(std::string(name) + " must be in [0, 1)");
}

std::string to_string(StructuralEncoding e) { return e == StructuralEncoding::degree ? "degree" : "none"; }

StructuralEncoding parse_encoding(std::string_view text) {
  if (text == "degree") return StructuralEncoding::degree;
  if (text == "none") return StructuralEncoding::none;
  throw ConfigError("unknown structural encoding '" + std::string(text) + "'");
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::residual_gcn:
      return "residual-gcn";
    case ModelKind::exphormer:
      return "exphormer";
    case ModelKind::attn_residual_gcn:
      return "attn-residual-gcn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "residual-gcn" || text == "residual_gcn") return ModelKind::residual_gcn;
  if (text == "exphormer") return ModelKind::exphormer;
  if (text == "attn-residual-gcn" || text == "attn_residual_gcn") return ModelKind::attn_residual_gcn;
  throw ConfigError("unknown model '" + std::string(text) + "'");
}

std::string to_string(AttnPlacement placement) {
  return placement == AttnPlacement::after_each_gcn ? "after_each_gcn" : "after_concat";
}

AttnPlacement parse_attn_placement(std::string_view text) {
  if (text == "after_each_gcn" || text == "after-each-gcn") return AttnPlacement::after_each_gcn;
  if (text == "after_concat" || text == "after-concat") return AttnPlacement::after_concat;
  throw ConfigError("unknown attention placement '" + std::string(text) + "'");
}

void ResidualGCNConfig::validate() const {
  if (num_gcn_layers < 1) throw ConfigError("num_gcn_layers must be >= 1");
  if (hidden_dim < 1 || mlp_hidden < 1) throw ConfigError("ResidualGCN dimensions must be >= 1");
  check_dropout(dropout, "dropout");
}

void ExphormerConfig::validate() const {
  if (num_layers < 1) throw ConfigError("num_layers must be >= 1");
  if (num_heads < 1 || hidden_dim % num_heads != 0) {
    throw ConfigError("hidden_dim " + std::to_string(hidden_dim) + " not divisible by num_heads " +
                      std::to_string(num_heads));
  }
  if (expander_degree < 2 || expander_degree % 2 != 0) throw ConfigError("expander_degree must be even and >= 2");
  check_dropout(dropout, "dropout");
  check_dropout(attention_dropout, "attention_dropout");
}

void AttnVariantConfig::validate() const {
  if (!(apply_probability >= 0.0 && apply_probability <= 1.0)) {
    throw ConfigError("apply_probability must be in [0, 1]");
  }
  if (num_heads < 1) throw ConfigError("num_heads must be >= 1");
  check_dropout(attention_dropout, "attention_dropout");
}

void ModelSpec::validate() const {
  switch (kind) {
    case ModelKind::residual_gcn:
      gcn.validate();
      break;
    case ModelKind::exphormer:
      exphormer.validate();
      break;
    case ModelKind::attn_residual_gcn: {
      gcn.validate();
      variant.validate();
      const std::size_t width =
          variant.placement == AttnPlacement::after_concat ? gcn.hidden_dim * gcn.num_gcn_layers : gcn.hidden_dim;
      if (width % variant.num_heads != 0) {
        throw ConfigError("attention width " + std::to_string(width) + " not divisible by " +
                          std::to_string(variant.num_heads) + " heads");
      }
      break;
    }
  }
}

nlohmann::ordered_json ModelSpec::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  if (kind != ModelKind::exphormer) {
    j["residual_gcn"] = {{"num_gcn_layers", gcn.num_gcn_layers},
                         {"hidden_dim", gcn.hidden_dim},
                         {"mlp_hidden", gcn.mlp_hidden},
                         {"dropout", gcn.dropout},
                         {"use_edge_weights", gcn.use_edge_weights}};
  }
  if (kind == ModelKind::exphormer) {
    j["exphormer"] = {{"num_layers", exphormer.num_layers},
                      {"num_heads", exphormer.num_heads},
                      {"hidden_dim", exphormer.hidden_dim},
                      {"dropout", exphormer.dropout},
                      {"attention_dropout", exphormer.attention_dropout},
                      {"expander_degree", exphormer.expander_degree},
                      {"num_global_nodes", exphormer.num_global_nodes},
                      {"structural_encoding", to_string(exphormer.structural_encoding)}};
  }
  if (kind == ModelKind::attn_residual_gcn) {
    j["variant"] = {{"placement", to_string(variant.placement)},
                    {"apply_probability", variant.apply_probability},
                    {"num_heads", variant.num_heads},
                    {"attention_dropout", variant.attention_dropout}};
  }
  return j;
}

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  require_known_keys(j, {"kind", "residual_gcn", "exphormer", "variant"}, "model config");
  ModelSpec s;
  try {
    if (j.contains("kind")) s.kind = parse_model_kind(j.at("kind").get<std::string>());
    if (j.contains("residual_gcn")) {
      const auto& g = j.at("residual_gcn");
      require_known_keys(g, {"num_gcn_layers", "hidden_dim", "mlp_hidden", "dropout", "use_edge_weights"},
                         "model.residual_gcn");
      s.gcn.num_gcn_layers = g.value("num_gcn_layers", s.gcn.num_gcn_layers);
      s.gcn.hidden_dim = g.value("hidden_dim", s.gcn.hidden_dim);
      s.gcn.mlp_hidden = g.value("mlp_hidden", s.gcn.mlp_hidden);
      s.gcn.dropout = g.value("dropout", s.gcn.dropout);
      s.gcn.use_edge_weights = g.value("use_edge_weights", s.gcn.use_edge_weights);
    }
    if (j.contains("exphormer")) {
      const auto& e = j.at("exphormer");
      require_known_keys(e,
                         {"num_layers", "num_heads", "hidden_dim", "dropout", "attention_dropout", "expander_degree",
                          "num_global_nodes", "structural_encoding"},
                         "model.exphormer");
      s.exphormer.num_layers = e.value("num_layers", s.exphormer.num_layers);
      s.exphormer.num_heads = e.value("num_heads", s.exphormer.num_heads);
      s.exphormer.hidden_dim = e.value("hidden_dim", s.exphormer.hidden_dim);
      s.exphormer.dropout = e.value("dropout", s.exphormer.dropout);
      s.exphormer.attention_dropout = e.value("attention_dropout", s.exphormer.attention_dropout);
      s.exphormer.expander_degree = e.value("expander_degree", s.exphormer.expander_degree);
      s.exphormer.num_global_nodes = e.value("num_global_nodes", s.exphormer.num_global_nodes);
      if (e.contains("structural_encoding")) {
        s.exphormer.structural_encoding = parse_encoding(e.at("structural_encoding").get<std::string>());
      }
    }
    if (j.contains("variant")) {
      const auto& v = j.at("variant");
      require_known_keys(v, {"placement", "apply_probability", "num_heads", "attention_dropout"}, "model.variant");
      if (v.contains("placement")) s.variant.placement = parse_attn_placement(v.at("placement").get<std::string>());
      s.variant.apply_probability = v.value("apply_probability", s.variant.apply_probability);
      s.variant.num_heads = v.value("num_heads", s.variant.num_heads);
      s.variant.attention_dropout = v.value("attention_dropout", s.variant.attention_dropout);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
  return s;
}

void Model::check_input(const PreparedGraph& g, std::size_t expected_cols) const {
  if (g.features.cols() != expected_cols) {
    throw DimensionError("model expects " + std::to_string(expected_cols) + " feature columns, graph has " +
                         std::to_string(g.features.cols()));
  }
  if (g.features.rows() != g.num_nodes || g.num_nodes == 0) {
    throw DimensionError("feature matrix " + ad::to_string(g.features.shape()) + " for " +
                         std::to_string(g.num_nodes) + " nodes");
  }
}

std::unique_ptr<Model> make_model(const ModelSpec& spec, std::size_t input_dim, std::size_t num_classes,
                                  std::uint64_t init_seed) {
  spec.validate();
  if (input_dim == 0 || num_classes < 2) throw ConfigError("model needs input_dim >= 1 and >= 2 classes");
  switch (spec.kind) {
    case ModelKind::residual_gcn:
      return std::make_unique<ResidualGCN>(spec.gcn, input_dim, num_classes, init_seed);
    case ModelKind::exphormer:
      return std::make_unique<Exphormer>(spec.exphormer, input_dim, num_classes, init_seed);
    case ModelKind::attn_residual_gcn:
      return std::make_unique<AttnResidualGCN>(spec.gcn, spec.variant, input_dim, num_classes, init_seed);
  }
  throw ConfigError("unknown model kind");
}

}  // namespace connectome::models
