// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/cli/sweep_options.hpp"

#include <fstream>
#include <sstream>

#include "connectome/common/errors.hpp"
#include "connectome/common/json_keys.hpp"
#include "connectome/common/hash.hpp"
#include "connectome/data/dataset_io.hpp"

namespace connectome::cli {

namespace {

template <typename T>
std::vector<T> parse_list(const std::string& text, T (*convert)(const std::string&)) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    if (first == std::string::npos) throw ConfigError("empty entry in list '" + text + "'");
    const auto last = item.find_last_not_of(" \t");
    out.push_back(convert(item.substr(first, last - first + 1)));
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

unsigned long long to_unsigned(const std::string& s) {
  if (s.empty() || s.front() == '-') throw ConfigError("not a non-negative integer: '" + s + "'");
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a non-negative integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a non-negative integer: '" + s + "'");
  return v;
}

std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(to_unsigned(s)); }
std::uint64_t to_seed(const std::string& s) { return static_cast<std::uint64_t>(to_unsigned(s)); }
models::ModelKind to_model(const std::string& s) { return models::parse_model_kind(s); }

void check_probabilities(const std::vector<double>& values, const char* name, bool allow_one) {
  if (values.empty()) throw ConfigError(std::string(name) + " must not be empty");
  for (double v : values) {
    if (!(v >= 0.0 && (allow_one ? v <= 1.0 : v < 1.0))) {
      throw ConfigError(std::string(name) + " entry " + std::to_string(v) + " outside " +
                        (allow_one ? "[0, 1]" : "[0, 1)"));
    }
  }
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) { return parse_list<double>(text, to_double); }
std::vector<std::size_t> parse_size_list(const std::string& text) { return parse_list<std::size_t>(text, to_size); }
std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  return parse_list<std::uint64_t>(text, to_seed);
}
std::vector<models::ModelKind> parse_model_list(const std::string& text) {
  return parse_list<models::ModelKind>(text, to_model);
}

std::vector<models::AttnVariantConfig> SweepSpec::default_variants() {
  std::vector<models::AttnVariantConfig> out;
  for (auto placement : {models::AttnPlacement::after_concat, models::AttnPlacement::after_each_gcn}) {
    for (double p : {0.0, 0.5, 1.0}) {
      models::AttnVariantConfig v;
      v.placement = placement;
      v.apply_probability = p;
      out.push_back(v);
    }
  }
  return out;
}

void SweepSpec::validate() const {
  if (!dataset_path && !synthetic) throw ConfigError("no dataset: pass --dataset or a synthetic spec");
  if (synthetic) synthetic->validate();
  if (models.empty()) throw ConfigError("at least one model is required");
  check_probabilities(drop_probabilities, "drop_probabilities", true);
  check_probabilities(dropout_grid, "dropout_grid", false);
  check_probabilities(attention_dropout_grid, "attention_dropout_grid", false);
  if (layer_counts.empty()) throw ConfigError("layer_counts must not be empty");
  for (auto l : layer_counts) {
    if (l < 1) throw ConfigError("layer counts must be >= 1");
  }
  if (variants.empty()) throw ConfigError("variants must not be empty");
  for (const auto& v : variants) v.validate();
  train.validate();
}

nlohmann::ordered_json SweepSpec::to_json() const {
  nlohmann::ordered_json j;
  if (dataset_path) j["dataset"] = dataset_path->string();
  if (synthetic) j["synthetic"] = data::to_json(*synthetic);
  auto kinds = nlohmann::ordered_json::array();
  for (auto k : models) kinds.push_back(models::to_string(k));
  j["models"] = std::move(kinds);
  j["drop_probabilities"] = drop_probabilities;
  j["dropout_grid"] = dropout_grid;
  j["attention_dropout_grid"] = attention_dropout_grid;
  j["layer_counts"] = layer_counts;
  auto vs = nlohmann::ordered_json::array();
  for (const auto& v : variants) {
    vs.push_back({{"placement", models::to_string(v.placement)}, {"apply_probability", v.apply_probability}});
  }
  j["variants"] = std::move(vs);
  j["train"] = train.to_json();
  j["out"] = out_dir.string();
  j["workers"] = workers;
  return j;
}

SweepSpec SweepSpec::from_json(const nlohmann::json& j, SweepSpec base) {
  require_known_keys(j,
                     {"dataset", "synthetic", "models", "drop_probabilities", "dropout_grid",
                      "attention_dropout_grid", "layer_counts", "variants", "train", "out", "workers"},
                     "sweep config");
  try {
    if (j.contains("dataset")) base.dataset_path = j.at("dataset").get<std::string>();
    if (j.contains("synthetic")) base.synthetic = data::synthetic_spec_from_json(j.at("synthetic"));
    if (j.contains("models")) {
      base.models.clear();
      for (const auto& m : j.at("models")) base.models.push_back(models::parse_model_kind(m.get<std::string>()));
    }
    base.drop_probabilities = j.value("drop_probabilities", base.drop_probabilities);
    base.dropout_grid = j.value("dropout_grid", base.dropout_grid);
    base.attention_dropout_grid = j.value("attention_dropout_grid", base.attention_dropout_grid);
    base.layer_counts = j.value("layer_counts", base.layer_counts);
    if (j.contains("variants")) {
      base.variants.clear();
      for (const auto& v : j.at("variants")) {
        require_known_keys(v, {"placement", "apply_probability"}, "sweep variant");
        models::AttnVariantConfig c = base.train.model.variant;
        if (v.contains("placement")) c.placement = models::parse_attn_placement(v.at("placement").get<std::string>());
        c.apply_probability = v.value("apply_probability", c.apply_probability);
        base.variants.push_back(c);
      }
    }
    if (j.contains("train")) base.train = training::TrainConfig::from_json(j.at("train"));
    if (j.contains("out")) base.out_dir = j.at("out").get<std::string>();
    base.workers = j.value("workers", base.workers);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return base;
}

SweepSpec SweepSpec::from_json(const nlohmann::json& j) { return from_json(j, SweepSpec{}); }

nlohmann::json read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
}

LoadedDataset resolve_dataset(const SweepSpec& spec) {
  LoadedDataset out;
  if (spec.dataset_path) {
    std::ifstream in(*spec.dataset_path, std::ios::binary);
    if (!in) throw IoError("cannot open dataset '" + spec.dataset_path->string() + "'");
    std::ostringstream bytes;
    bytes << in.rdbuf();
    const std::string text = bytes.str();
    out.dataset = data::parse_dataset(text);
    out.name = spec.dataset_path->stem().string();
    out.hash = git_blob_hash(text);
    return out;
  }
  if (!spec.synthetic) throw ConfigError("no dataset: pass --dataset or a synthetic spec");
  out.dataset = data::make_synthetic_dataset(*spec.synthetic);
  out.name = "synthetic-" + data::to_string(spec.synthetic->label_mode);
  out.hash = git_blob_hash(data::serialize_dataset(out.dataset));
  return out;
}

}  // namespace connectome::cli
