// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "connectome/common/errors.hpp"

namespace connectome::models {

Propagation normalized_adjacency(const data::ConnectomeGraph& g, bool use_edge_weights) {
  const std::size_t n = g.n;
  std::vector<double> degree(n, 1.0);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const double w = use_edge_weights ? g.weights[i] : 1.0;
    degree[g.edges[i].u] += w;
    degree[g.edges[i].v] += w;
  }
  std::vector<double> inv_sqrt(n);
  for (std::size_t v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(degree[v]);

  struct Entry {
    ad::Edge edge;
    double weight;
  };
  std::vector<Entry> entries;
  entries.reserve(2 * g.edges.size() + n);
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto [u, v] = g.edges[i];
    const double w = (use_edge_weights ? g.weights[i] : 1.0) * inv_sqrt[u] * inv_sqrt[v];
    entries.push_back({{u, v}, w});
    entries.push_back({{v, u}, w});
  }
  for (std::uint32_t v = 0; v < n; ++v) entries.push_back({{v, v}, inv_sqrt[v] * inv_sqrt[v]});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(a.edge.dst, a.edge.src) < std::tie(b.edge.dst, b.edge.src);
  });

  Propagation p;
  p.num_nodes = n;
  p.edges.reserve(entries.size());
  p.weights.reserve(entries.size());
  for (const auto& e : entries) {
    p.edges.push_back(e.edge);
    p.weights.push_back(e.weight);
  }
  return p;
}

ad::Tensor gcn_layer(ad::Tape& tape, const Propagation& propagation, const ad::Tensor& h, const ad::Tensor& weight) {
  if (h.rows() != propagation.num_nodes) {
    throw DimensionError("gcn_layer: features " + ad::to_string(h.shape()) + " for " +
                         std::to_string(propagation.num_nodes) + " nodes");
  }
  auto projected = ad::matmul(tape, h, weight);
  return ad::relu(tape, ad::sparse_aggregate(tape, propagation.edges, propagation.weights, projected));
}

ad::Tensor gcn_layer(ad::Tape& tape, const data::ConnectomeGraph& g, const ad::Tensor& h, const ad::Tensor& weight,
                     bool use_edge_weights) {
  return gcn_layer(tape, normalized_adjacency(g, use_edge_weights), h, weight);
}

ad::Tensor node_features(const data::ConnectomeGraph& g) { return ad::Tensor(g.n, g.d, g.x); }

}  // namespace connectome::models
