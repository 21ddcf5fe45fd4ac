// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <vector>

#include "connectome/autodiff/param_store.hpp"
#include "json.hpp"

// Parameter checkpoint container, all integers little-endian:
//   magic "CNBCKPT1" (8 bytes)
//   u64 config length, config JSON bytes
//   u64 tensor count, then per tensor:
//     u64 name length, name bytes, u64 rows, u64 cols, rows*cols f64 values

namespace connectome::models {

struct Checkpoint {
  nlohmann::ordered_json config;
  std::vector<ad::NamedTensor> tensors;
};

/// Throws IoError if the file cannot be written.
void save_checkpoint(const std::filesystem::path& path, const ad::ParamStore& params,
                     const nlohmann::ordered_json& config);
/// Throws IoError for missing files, ParseError for malformed content.
Checkpoint load_checkpoint(const std::filesystem::path& path);
/// Copies checkpoint values into `params`. Names and shapes must match exactly.
void restore_params(ad::ParamStore& params, const Checkpoint& checkpoint);

}  // namespace connectome::models
