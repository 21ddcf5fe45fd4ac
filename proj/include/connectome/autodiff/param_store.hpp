// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "connectome/autodiff/tensor.hpp"

namespace connectome::ad {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

/// Ordered, named collection of trainable tensors.
class ParamStore {
 public:
  /// Adds a parameter; names must be unique. Returns the stored handle.
  Tensor add(std::string name, Tensor tensor);

  /// Adds a [rows x cols] parameter with Glorot-uniform values drawn from a
  /// stream derived from (init_seed, name), so a parameter's initial value
  /// does not depend on which other parameters exist.
  Tensor add_glorot(std::string name, std::size_t rows, std::size_t cols, std::uint64_t init_seed);
  Tensor add_constant(std::string name, std::size_t rows, std::size_t cols, double value);

  const Tensor& get(std::string_view name) const;
  bool contains(std::string_view name) const noexcept;

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<NamedTensor>& entries() const noexcept { return entries_; }
  std::vector<Tensor> tensors() const;

  void zero_grad();
  std::size_t parameter_count() const noexcept;

 private:
  std::vector<NamedTensor> entries_;
};

}  // namespace connectome::ad
