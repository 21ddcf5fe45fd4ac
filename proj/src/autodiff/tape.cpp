// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/autodiff/tape.hpp"

#include <algorithm>

#include "connectome/common/errors.hpp"

namespace connectome::ad {

void Tape::record(std::string_view kind, std::vector<Tensor> inputs, Tensor& output, std::function<void()> backward) {
  if (!recording_) return;
  const bool any = std::any_of(inputs.begin(), inputs.end(), [](const Tensor& t) { return t.requires_grad(); });
  if (!any) return;
  output.set_requires_grad(true);
  nodes_.push_back(OpNode{kind, std::move(inputs), output, std::move(backward)});
}

void Tape::backward(const Tensor& loss) {
  if (loss.size() != 1) {
    throw ContractError("backward requires a scalar loss, got shape " + to_string(loss.shape()));
  }
  if (!loss.requires_grad()) return;

  for (auto& node : nodes_) {
    if (node.output.has_grad()) node.output.zero_grad();
    node.output.grad_buffer();
  }
  Tensor seed = loss;
  seed.grad_buffer()[0] += 1.0;
  for (auto it = nodes_.rbegin(); it != nodes_.rend(); ++it) {
    for (auto& in : it->inputs) {
      if (in.requires_grad()) in.grad_buffer();
    }
    it->backward();
  }
}

}  // namespace connectome::ad
