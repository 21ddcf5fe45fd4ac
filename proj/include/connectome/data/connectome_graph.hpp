// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"

namespace connectome::data {

/// Undirected edge stored once with u < v.
struct UndirectedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;

  auto operator<=>(const UndirectedEdge&) const = default;
};

/// One static connectome: n ROIs, an n x d feature matrix (row v is ROI v's
/// feature vector), thresholded correlation edges and a graph-level label.
struct ConnectomeGraph {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;  // n * d, row-major
  std::vector<UndirectedEdge> edges;
  std::vector<double> weights;  // one per edge
  int label = 0;

  /// Throws ContractError when a structural invariant is broken: feature
  /// size, endpoint range, u < v ordering, duplicate edges, weight count.
  void validate() const;

  /// |E| / (n (n - 1) / 2); 0 for graphs with fewer than two nodes.
  double edge_density() const noexcept;

  bool operator==(const ConnectomeGraph&) const = default;
};

/// A labelled collection of graphs plus the header metadata written to disk.
struct Dataset {
  int num_classes = 0;
  nlohmann::ordered_json spec = nlohmann::ordered_json::object();
  std::vector<ConnectomeGraph> graphs;

  std::vector<int> labels() const;
  double mean_edge_density() const noexcept;

  bool operator==(const Dataset&) const = default;
};

}  // namespace connectome::data
