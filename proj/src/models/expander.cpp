// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/expander.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::models {

std::vector<data::UndirectedEdge> build_expander(std::size_t n, std::size_t degree, std::uint64_t seed) {
  if (degree < 2 || degree % 2 != 0) {
    throw ConfigError("expander degree must be even and >= 2, got " + std::to_string(degree));
  }
  if (n < 3) throw ConfigError("expander needs at least 3 nodes, got " + std::to_string(n));

  Rng rng(seed);
  std::vector<std::uint32_t> cycle(n);
  std::vector<data::UndirectedEdge> edges;
  edges.reserve(n * degree / 2);
  for (std::size_t c = 0; c < degree / 2; ++c) {
    std::iota(cycle.begin(), cycle.end(), 0u);
    std::shuffle(cycle.begin(), cycle.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t a = cycle[i];
      const std::uint32_t b = cycle[(i + 1) % n];
      edges.push_back({std::min(a, b), std::max(a, b)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace connectome::models
