// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "connectome/autodiff/ops.hpp"
#include "connectome/data/connectome_graph.hpp"

namespace connectome::models {

/// Where an attention edge came from. When several components produce the
/// same directed pair, the earlier kind in this list wins.
enum class EdgeKind : std::uint8_t { local, expander, global, self_loop };

std::string to_string(EdgeKind kind);

/// Directed attention edges over n real nodes followed by g virtual
/// (global) nodes. Edges are unique and sorted by (dst, src); `destinations`
/// mirrors edges[i].dst for segment softmax.
struct InteractionGraph {
  std::size_t num_real = 0;
  std::size_t num_global = 0;
  std::vector<ad::Edge> edges;
  std::vector<EdgeKind> kinds;
  std::vector<std::uint32_t> destinations;

  std::size_t num_nodes() const noexcept { return num_real + num_global; }
  bool is_virtual(std::uint32_t node) const noexcept { return node >= num_real; }
  std::size_t count(EdgeKind kind) const noexcept;
};

/// Local edges (both directions of g's edges), expander edges (both
/// directions of build_expander(n, expander_degree, seed); skipped when
/// n < 3), edges between each of `num_global` virtual nodes and every real
/// node in both directions, and a self-loop on every node.
InteractionGraph build_interaction_graph(const data::ConnectomeGraph& g, std::size_t expander_degree,
                                         std::size_t num_global, std::uint64_t seed);

/// Local edges plus self-loops only.
InteractionGraph build_local_interaction_graph(const data::ConnectomeGraph& g);

}  // namespace connectome::models
