// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/edge_drop.hpp"

#include <string>

#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::data {

ConnectomeGraph drop_edges(const ConnectomeGraph& g, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge drop probability " + std::to_string(p) + " not in [0, 1]");
  ConnectomeGraph out = g;
  out.edges.clear();
  out.weights.clear();
  Rng rng(seed);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    // u < p never holds for p = 0 and always holds for p = 1.
    if (uniform01(rng) < p) continue;
    out.edges.push_back(g.edges[i]);
    out.weights.push_back(g.weights[i]);
  }
  return out;
}

}  // namespace connectome::data
