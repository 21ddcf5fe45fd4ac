// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/connectome_graph.hpp"

#include <algorithm>
#include <string>

#include "connectome/common/errors.hpp"

namespace connectome::data {

void ConnectomeGraph::validate() const {
  if (x.size() != n * d) {
    throw ContractError("feature matrix has " + std::to_string(x.size()) + " values, expected " +
                        std::to_string(n) + "x" + std::to_string(d));
  }
  if (weights.size() != edges.size()) {
    throw ContractError(std::to_string(edges.size()) + " edges but " + std::to_string(weights.size()) + " weights");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    if (e.u >= n || e.v >= n) {
      throw ContractError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") outside " +
                          std::to_string(n) + " nodes");
    }
    if (e.u >= e.v) {
      throw ContractError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) + ") is not stored as u < v");
    }
  }
  auto sorted = edges;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ContractError("duplicate edge");
}

double ConnectomeGraph::edge_density() const noexcept {
  if (n < 2) return 0.0;
  return static_cast<double>(edges.size()) / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::vector<int> Dataset::labels() const {
  std::vector<int> out;
  out.reserve(graphs.size());
  for (const auto& g : graphs) out.push_back(g.label);
  return out;
}

double Dataset::mean_edge_density() const noexcept {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& g : graphs) total += g.edge_density();
  return total / static_cast<double>(graphs.size());
}

}  // namespace connectome::data
