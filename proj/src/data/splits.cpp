// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/splits.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::data {

namespace {

constexpr std::size_t kSplits = 3;

}  // namespace

DatasetSplits split(std::span<const int> labels, int num_classes, SplitRatios ratios, std::uint64_t seed) {
  const std::array<double, kSplits> r{ratios.train, ratios.val, ratios.test};
  if (std::any_of(r.begin(), r.end(), [](double x) { return !(x >= 0.0); }) ||
      std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw ConfigError("split ratios must be non-negative and sum to 1");
  }
  if (num_classes < 1) throw ConfigError("num_classes must be positive");

  const std::size_t total = labels.size();
  const auto classes = static_cast<std::size_t>(num_classes);
  std::vector<std::vector<std::size_t>> members(classes);
  for (std::size_t i = 0; i < total; ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes) {
      throw IndexError("label " + std::to_string(labels[i]) + " at index " + std::to_string(i) + " outside [0, " +
                       std::to_string(num_classes) + ")");
    }
    members[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  // Controlled rounding of the class x split table of targets
  // |class| * ratio: every cell and every split total ends at the floor or
  // ceiling of its target. Cells start at their floors; the leftover units
  // of each class are routed by max-flow, first up to each split's floor
  // total, then up to its ceiling.
  std::vector<std::array<std::size_t, kSplits>> alloc(classes);
  std::vector<std::array<bool, kSplits>> open(classes);
  std::vector<std::size_t> leftover(classes, 0);
  std::array<double, kSplits> column_frac{};
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t used = 0;
    for (std::size_t s = 0; s < kSplits; ++s) {
      double target = static_cast<double>(members[c].size()) * r[s];
      if (std::abs(target - std::round(target)) < 1e-9) target = std::round(target);
      alloc[c][s] = static_cast<std::size_t>(std::floor(target));
      open[c][s] = target > std::floor(target);
      column_frac[s] += target - std::floor(target);
      used += alloc[c][s];
    }
    leftover[c] = members[c].size() - used;
  }

  // Nodes: 0 source, 1..classes, then splits, then sink.
  const std::size_t nodes = classes + kSplits + 2;
  const std::size_t sink = nodes - 1;
  auto split_node = [&](std::size_t s) { return 1 + classes + s; };
  std::vector<std::vector<long>> cap(nodes, std::vector<long>(nodes, 0));
  for (std::size_t c = 0; c < classes; ++c) {
    cap[0][1 + c] = static_cast<long>(leftover[c]);
    for (std::size_t s = 0; s < kSplits; ++s) cap[1 + c][split_node(s)] = open[c][s] ? 1 : 0;
  }
  auto augment_all = [&] {
    for (;;) {
      std::vector<std::size_t> parent(nodes, nodes);
      std::vector<std::size_t> stack{0};
      parent[0] = 0;
      while (!stack.empty() && parent[sink] == nodes) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v = nodes; v-- > 0;) {
          if (parent[v] == nodes && cap[u][v] > 0) {
            parent[v] = u;
            stack.push_back(v);
          }
        }
      }
      if (parent[sink] == nodes) return;
      for (std::size_t v = sink; v != 0; v = parent[v]) {
        --cap[parent[v]][v];
        ++cap[v][parent[v]];
      }
    }
  };
  for (std::size_t s = 0; s < kSplits; ++s) {
    cap[split_node(s)][sink] = static_cast<long>(std::floor(column_frac[s] + 1e-9));
  }
  augment_all();
  for (std::size_t s = 0; s < kSplits; ++s) {
    const auto floor_total = static_cast<long>(std::floor(column_frac[s] + 1e-9));
    const auto ceil_total = static_cast<long>(std::ceil(column_frac[s] - 1e-9));
    cap[split_node(s)][sink] += ceil_total - floor_total;
  }
  augment_all();
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t s = 0; s < kSplits; ++s) {
      // Flow on a class -> split edge shows up as residual capacity in reverse.
      alloc[c][s] += static_cast<std::size_t>(cap[split_node(s)][1 + c]);
    }
    std::size_t placed = 0;
    for (std::size_t s = 0; s < kSplits; ++s) placed += alloc[c][s];
    if (placed != members[c].size()) throw ContractError("split rounding failed to place every graph");
  }

  DatasetSplits out;
  std::array<std::vector<std::size_t>*, kSplits> targets{&out.train, &out.val, &out.test};
  for (std::size_t c = 0; c < classes; ++c) {
    Rng rng(derive_seed(seed, {fnv1a("split"), c}));
    auto idx = members[c];
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < kSplits; ++s) {
      for (std::size_t k = 0; k < alloc[c][s]; ++k) targets[s]->push_back(idx[pos++]);
    }
  }
  for (auto* t : targets) std::sort(t->begin(), t->end());
  return out;
}

DatasetSplits split(const Dataset& dataset, SplitRatios ratios, std::uint64_t seed) {
  const auto labels = dataset.labels();
  return split(labels, dataset.num_classes, ratios, seed);
}

}  // namespace connectome::data
