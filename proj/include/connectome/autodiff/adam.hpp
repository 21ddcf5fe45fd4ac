// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "connectome/autodiff/tensor.hpp"

namespace connectome::ad {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment buffers, one per parameter in registration order.
struct AdamState {
  std::vector<std::vector<double>> first_moment;
  std::vector<std::vector<double>> second_moment;
  std::uint64_t step = 0;
};

/// One bias-corrected Adam update using each parameter's accumulated
/// gradient. Parameters without a gradient buffer count as zero gradient.
/// Gradients are left untouched; callers zero them between steps.
void adam_step(std::span<const Tensor> params, AdamState& state, double lr, const AdamConfig& config = {});

}  // namespace connectome::ad
