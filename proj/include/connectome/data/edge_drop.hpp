// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "connectome/data/connectome_graph.hpp"

namespace connectome::data {

/// Copy of `g` where each edge is removed independently with probability p.
/// Nodes, features and label are untouched. Throws ConfigError unless p is in [0, 1].
ConnectomeGraph drop_edges(const ConnectomeGraph& g, double p, std::uint64_t seed);

}  // namespace connectome::data
