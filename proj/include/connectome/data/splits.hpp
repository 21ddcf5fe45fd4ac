// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "connectome/data/connectome_graph.hpp"

namespace connectome::data {

struct SplitRatios {
  double train = 0.7;
  double val = 0.15;
  double test = 0.15;
};

/// Disjoint, sorted index lists whose union is every graph index.
struct DatasetSplits {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  bool operator==(const DatasetSplits&) const = default;
};

/// Stratified seeded split. Every class x split count is the floor or
/// ceiling of |class| * ratio, and every split size the floor or ceiling of
/// N * ratio. Throws ConfigError when the ratios
/// are negative or do not sum to 1.
DatasetSplits split(std::span<const int> labels, int num_classes, SplitRatios ratios, std::uint64_t seed);
DatasetSplits split(const Dataset& dataset, SplitRatios ratios, std::uint64_t seed);

}  // namespace connectome::data
