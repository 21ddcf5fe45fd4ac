// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "connectome/data/connectome_graph.hpp"

namespace connectome::models {

/// Union of degree/2 independent uniformly random Hamiltonian cycles on
/// nodes [0, n), deduplicated and sorted. Every node ends with degree in
/// [2, degree] and the result is connected (the first cycle spans all nodes).
/// Throws ConfigError for odd or < 2 degree, or n < 3.
std::vector<data::UndirectedEdge> build_expander(std::size_t n, std::size_t degree, std::uint64_t seed);

}  // namespace connectome::models
