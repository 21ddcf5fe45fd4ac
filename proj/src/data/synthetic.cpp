// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "connectome/common/errors.hpp"
#include "connectome/common/json_keys.hpp"
#include "connectome/common/random.hpp"
#include "connectome/data/correlation.hpp"

namespace connectome::data {

namespace {

constexpr std::size_t kSeriesLengthFactor = 4;  // T = 4n
constexpr std::size_t kMinBackgroundCommunities = 2;
constexpr std::size_t kMaxBackgroundCommunities = 6;

/// ±1 pattern per class over feature columns, shared by every graph.
std::vector<std::vector<double>> class_patterns(const SyntheticSpec& spec) {
  std::vector<std::vector<double>> patterns(static_cast<std::size_t>(spec.num_classes));
  for (int c = 0; c < spec.num_classes; ++c) {
    Rng rng(derive_seed(spec.seed, {fnv1a("class-pattern"), static_cast<std::uint64_t>(c)}));
    auto& p = patterns[static_cast<std::size_t>(c)];
    p.resize(spec.feature_dim());
    for (double& v : p) v = uniform01(rng) < 0.5 ? -1.0 : 1.0;
  }
  return patterns;
}

ConnectomeGraph generate_one(const SyntheticSpec& spec, std::size_t index,
                             const std::vector<std::vector<double>>& patterns) {
  const int label = static_cast<int>(index % static_cast<std::size_t>(spec.num_classes));
  const std::size_t n = spec.n;
  const std::size_t t = kSeriesLengthFactor * n;
  Rng rng(derive_seed(spec.seed, {fnv1a("graph"), index}));
  std::normal_distribution<double> normal(0.0, 1.0);

  std::size_t communities = 0;
  if (spec.label_mode == LabelMode::feature_only) {
    const std::size_t hi = std::min(kMaxBackgroundCommunities, std::max<std::size_t>(n / 2, 1));
    const std::size_t lo = std::min(kMinBackgroundCommunities, hi);
    communities = lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  } else {
    communities = communities_for_class(label, n);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::size_t> community_of(n);
  for (std::size_t i = 0; i < n; ++i) community_of[order[i]] = i % communities;

  std::vector<double> factors(communities * t);
  for (double& f : factors) f = normal(rng);
  std::vector<double> series(n * t);
  for (std::size_t v = 0; v < n; ++v) {
    const double* f = factors.data() + community_of[v] * t;
    for (std::size_t i = 0; i < t; ++i) series[v * t + i] = f[i] + spec.noise_scale * normal(rng);
  }

  ConnectomeGraph g = build_graph(pearson_correlation(series, n, t), spec.threshold, label, spec.feature_dim());

  if (spec.label_mode == LabelMode::structure_only) {
    for (double& v : g.x) v = normal(rng);
  } else {
    const std::size_t subset = std::max<std::size_t>(1, n / 5);
    const auto& pattern = patterns[static_cast<std::size_t>(label)];
    for (std::size_t v = 0; v < subset; ++v) {
      for (std::size_t j = 0; j < g.d; ++j) g.x[v * g.d + j] += spec.signal_strength * pattern[j];
    }
  }
  return g;
}

}  // namespace

std::string to_string(LabelMode mode) {
  switch (mode) {
    case LabelMode::feature_only:
      return "feature_only";
    case LabelMode::structure_only:
      return "structure_only";
    case LabelMode::mixed:
      return "mixed";
  }
  return "unknown";
}

LabelMode parse_label_mode(std::string_view text) {
  if (text == "feature_only" || text == "feature-only") return LabelMode::feature_only;
  if (text == "structure_only" || text == "structure-only") return LabelMode::structure_only;
  if (text == "mixed") return LabelMode::mixed;
  throw ConfigError("unknown label mode '" + std::string(text) + "'");
}

void SyntheticSpec::validate() const {
  if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
  if (n < 4) throw ConfigError("n must be >= 4");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
  if (d > n) throw ConfigError("d must not exceed n");
  if (!(noise_scale > 0.0)) throw ConfigError("noise_scale must be positive");
  if (!(signal_strength >= 0.0)) throw ConfigError("signal_strength must be non-negative");
}

nlohmann::ordered_json to_json(const SyntheticSpec& spec) {
  nlohmann::ordered_json j;
  j["num_graphs"] = spec.num_graphs;
  j["n"] = spec.n;
  j["d"] = spec.feature_dim();
  j["num_classes"] = spec.num_classes;
  j["threshold"] = spec.threshold;
  j["label_mode"] = to_string(spec.label_mode);
  j["noise_scale"] = spec.noise_scale;
  j["signal_strength"] = spec.signal_strength;
  j["seed"] = spec.seed;
  return j;
}

SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j) {
  require_known_keys(j,
                     {"num_graphs", "n", "d", "num_classes", "threshold", "label_mode", "noise_scale",
                      "signal_strength", "seed"},
                     "synthetic spec");
  SyntheticSpec spec;
  try {
    spec.num_graphs = j.value("num_graphs", spec.num_graphs);
    spec.n = j.value("n", spec.n);
    spec.d = j.value("d", spec.d);
    spec.num_classes = j.value("num_classes", spec.num_classes);
    spec.threshold = j.value("threshold", spec.threshold);
    if (j.contains("label_mode")) spec.label_mode = parse_label_mode(j.at("label_mode").get<std::string>());
    spec.noise_scale = j.value("noise_scale", spec.noise_scale);
    spec.signal_strength = j.value("signal_strength", spec.signal_strength);
    spec.seed = j.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  if (spec.d == spec.n) spec.d = 0;
  return spec;
}

std::size_t communities_for_class(int label, std::size_t n) {
  std::size_t k = 2;
  for (int c = 0; c < label; ++c) k *= 3;
  return std::min(k, std::max<std::size_t>(n / 2, 1));
}

std::vector<ConnectomeGraph> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const auto patterns = class_patterns(spec);
  std::vector<ConnectomeGraph> graphs;
  graphs.reserve(spec.num_graphs);
  for (std::size_t i = 0; i < spec.num_graphs; ++i) graphs.push_back(generate_one(spec, i, patterns));
  return graphs;
}

Dataset make_synthetic_dataset(const SyntheticSpec& spec) {
  Dataset ds;
  ds.num_classes = spec.num_classes;
  ds.spec = to_json(spec);
  ds.graphs = generate_synthetic(spec);
  return ds;
}

}  // namespace connectome::data
