// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "connectome/autodiff/ops.hpp"
#include "connectome/common/random.hpp"

namespace connectome::models {

/// Counters a forward pass bumps; used by tests and diagnostics.
struct ForwardStats {
  std::size_t forwards = 0;
  std::size_t attention_applications = 0;
};

/// Per-forward execution settings. Every stochastic site (dropout masks,
/// attention insertion draws) derives its seed from `seed` and a stable site
/// name, so models that share sites consume identical randomness.
struct ForwardContext {
  ad::Mode mode = ad::Mode::eval;
  std::uint64_t seed = 0;
  ForwardStats* stats = nullptr;

  std::uint64_t site_seed(std::string_view site) const noexcept { return derive_seed(seed, site); }
};

}  // namespace connectome::models
