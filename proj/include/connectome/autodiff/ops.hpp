// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "connectome/autodiff/tape.hpp"
#include "connectome/autodiff/tensor.hpp"

// Differentiable operations. Every op takes the tape it records into as the
// first argument; when no input requires a gradient nothing is recorded.

namespace connectome::ad {

enum class Mode { train, eval };

/// Directed edge src -> dst. Messages flow from src into dst.
struct Edge {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;

  bool operator==(const Edge&) const = default;
};

/// True when edges are ordered by (dst, src), the canonical reduction order.
bool is_dst_sorted(std::span<const Edge> edges) noexcept;

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b);
Tensor add(Tape& tape, const Tensor& a, const Tensor& b);
/// x + bias, with bias [1 x cols] added to every row.
Tensor add_row(Tape& tape, const Tensor& x, const Tensor& bias);
Tensor scale(Tape& tape, const Tensor& x, double factor);
Tensor relu(Tape& tape, const Tensor& x);
/// Sum of all entries as a [1 x 1] tensor.
Tensor sum(Tape& tape, const Tensor& x);

Tensor concat_cols(Tape& tape, std::span<const Tensor> parts);
Tensor concat_rows(Tape& tape, const Tensor& top, const Tensor& bottom);
/// Rows [begin, end) of x.
Tensor slice_rows(Tape& tape, const Tensor& x, std::size_t begin, std::size_t end);
/// Column means over rows, shape [1 x cols].
Tensor mean_pool_rows(Tape& tape, const Tensor& x);

/// Inverted dropout. In eval mode, or with rate 0, returns `h` itself.
/// The mask depends only on (seed, h.size(), rate).
Tensor dropout(Tape& tape, const Tensor& h, double rate, Mode mode, std::uint64_t seed);

/// out[v] = sum over edges (u -> v) of weight * h[u]; out has h's shape.
/// Sums run in (dst, src) order regardless of the input edge order.
Tensor sparse_aggregate(Tape& tape, std::span<const Edge> edges, std::span<const double> weights, const Tensor& h);

/// Per-segment softmax over plain scores. Used by the differentiable op and
/// directly by tests.
std::vector<double> segment_softmax(std::span<const double> scores, std::span<const std::uint32_t> segment_of,
                                    std::size_t num_segments);

/// Column-wise segment softmax: scores is [E x H], each column normalized
/// independently within every segment.
Tensor softmax_segments(Tape& tape, const Tensor& scores, std::span<const std::uint32_t> segment_of,
                        std::size_t num_segments);

/// Multi-head dot-product scores over an edge list: [E x heads] with
/// s[e, h] = scale * <q[dst] , k[src]> restricted to head h's column block.
Tensor edge_scores(Tape& tape, const Tensor& q, const Tensor& k, std::span<const Edge> edges, std::size_t heads,
                   double scale);

/// out[dst, head block] += w[e, head] * v[src, head block], out is [num_nodes x v.cols()].
Tensor attention_aggregate(Tape& tape, const Tensor& weights, const Tensor& v, std::span<const Edge> edges,
                           std::size_t heads, std::size_t num_nodes);

/// Row-wise layer normalization with learned gain and bias ([1 x cols] each).
Tensor layer_norm(Tape& tape, const Tensor& x, const Tensor& gain, const Tensor& bias, double eps = 1e-5);

/// Mean over rows of -log softmax(logits)[label], as a [1 x 1] tensor.
Tensor cross_entropy(Tape& tape, const Tensor& logits, std::span<const int> labels);

}  // namespace connectome::ad
