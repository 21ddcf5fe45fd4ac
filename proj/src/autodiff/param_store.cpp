// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/autodiff/param_store.hpp"

#include <algorithm>
#include <cmath>

#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::ad {

Tensor ParamStore::add(std::string name, Tensor tensor) {
  if (contains(name)) throw ConfigError("duplicate parameter name '" + name + "'");
  tensor.set_requires_grad(true);
  entries_.push_back({std::move(name), tensor});
  return tensor;
}

Tensor ParamStore::add_glorot(std::string name, std::size_t rows, std::size_t cols, std::uint64_t init_seed) {
  Rng rng(derive_seed(init_seed, name));
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::vector<double> values(rows * cols);
  for (double& v : values) v = (2.0 * uniform01(rng) - 1.0) * limit;
  return add(std::move(name), Tensor(rows, cols, std::move(values)));
}

Tensor ParamStore::add_constant(std::string name, std::size_t rows, std::size_t cols, double value) {
  return add(std::move(name), Tensor::full(rows, cols, value));
}

const Tensor& ParamStore::get(std::string_view name) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const NamedTensor& e) { return e.name == name; });
  if (it == entries_.end()) throw LookupError("no parameter named '" + std::string(name) + "'");
  return it->tensor;
}

bool ParamStore::contains(std::string_view name) const noexcept {
  return std::any_of(entries_.begin(), entries_.end(), [&](const NamedTensor& e) { return e.name == name; });
}

std::vector<Tensor> ParamStore::tensors() const {
  std::vector<Tensor> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.tensor);
  return out;
}

void ParamStore::zero_grad() {
  for (auto& e : entries_) e.tensor.zero_grad();
}

std::size_t ParamStore::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& e : entries_) n += e.tensor.size();
  return n;
}

}  // namespace connectome::ad
