// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "connectome/autodiff/ops.hpp"
#include "connectome/data/connectome_graph.hpp"

namespace connectome::models {

/// Entries of D^-1/2 (A + I) D^-1/2 as a directed edge list sorted by
/// (dst, src). A is the symmetrized adjacency, weighted by the correlation
/// values when `use_edge_weights` is set; D is its degree plus the self-loop.
struct Propagation {
  std::size_t num_nodes = 0;
  std::vector<ad::Edge> edges;
  std::vector<double> weights;
};

Propagation normalized_adjacency(const data::ConnectomeGraph& g, bool use_edge_weights);

/// ReLU(Â h W). With no edges Â = I exactly, so the layer is ReLU(h W).
ad::Tensor gcn_layer(ad::Tape& tape, const Propagation& propagation, const ad::Tensor& h, const ad::Tensor& weight);
ad::Tensor gcn_layer(ad::Tape& tape, const data::ConnectomeGraph& g, const ad::Tensor& h, const ad::Tensor& weight,
                     bool use_edge_weights = true);

/// The graph's n x d feature matrix as a constant tensor.
ad::Tensor node_features(const data::ConnectomeGraph& g);

}  // namespace connectome::models
