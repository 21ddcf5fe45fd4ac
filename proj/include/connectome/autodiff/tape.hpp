// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "connectome/autodiff/tensor.hpp"

namespace connectome::ad {

/// One recorded operation. `backward` reads `output`'s gradient and
/// accumulates into the gradients of the inputs that require them; any
/// activations it needs are captured in the closure.
struct OpNode {
  std::string_view kind;
  std::vector<Tensor> inputs;
  Tensor output;
  std::function<void()> backward;
};

/// Ordered record of differentiable operations. Nodes are appended as ops
/// execute, so every node's inputs were produced before it.
///
/// A tape belongs to one worker and one forward pass.
class Tape {
 public:
  /// A non-recording tape turns every op into a plain forward computation.
  explicit Tape(bool recording = true) : recording_(recording) {}

  /// Records `output = kind(inputs)` if any input requires a gradient; in
  /// that case the output is marked as requiring one too.
  void record(std::string_view kind, std::vector<Tensor> inputs, Tensor& output, std::function<void()> backward);

  /// Propagates d(loss)/d(.) to every requires_grad tensor reachable from
  /// `loss`. Gradients of leaves accumulate across calls; intermediate
  /// gradients are reset at the start of each call.
  void backward(const Tensor& loss);

  std::size_t size() const noexcept { return nodes_.size(); }
  const OpNode& node(std::size_t i) const { return nodes_.at(i); }
  void clear() noexcept { nodes_.clear(); }
  bool recording() const noexcept { return recording_; }

 private:
  bool recording_ = true;
  std::vector<OpNode> nodes_;
};

}  // namespace connectome::ad
