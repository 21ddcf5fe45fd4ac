// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/autodiff/tensor.hpp"

#include <algorithm>

#include "connectome/common/errors.hpp"

namespace connectome::ad {

std::string to_string(Shape s) { return "[" + std::to_string(s.rows) + "x" + std::to_string(s.cols) + "]"; }

Tensor::Tensor() : s_(std::make_shared<Storage>()) {}

Tensor::Tensor(std::size_t rows, std::size_t cols, bool requires_grad) : s_(std::make_shared<Storage>()) {
  s_->shape = {rows, cols};
  s_->values.assign(rows * cols, 0.0);
  s_->requires_grad = requires_grad;
}

Tensor::Tensor(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad)
    : s_(std::make_shared<Storage>()) {
  if (values.size() != rows * cols) {
    throw DimensionError("tensor of shape " + to_string({rows, cols}) + " given " + std::to_string(values.size()) +
                         " values");
  }
  s_->shape = {rows, cols};
  s_->values = std::move(values);
  s_->requires_grad = requires_grad;
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows, bool requires_grad) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> values;
  values.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw DimensionError("ragged initializer for tensor");
    values.insert(values.end(), row.begin(), row.end());
  }
  return Tensor(r, c, std::move(values), requires_grad);
}

Tensor Tensor::full(std::size_t rows, std::size_t cols, double value, bool requires_grad) {
  return Tensor(rows, cols, std::vector<double>(rows * cols, value), requires_grad);
}

double Tensor::item() const {
  if (size() != 1) throw ContractError("item() on tensor of shape " + to_string(shape()));
  return s_->values[0];
}

std::span<double> Tensor::grad_buffer() const {
  if (s_->grad.size() != s_->values.size()) s_->grad.assign(s_->values.size(), 0.0);
  return s_->grad;
}

void Tensor::zero_grad() noexcept { std::fill(s_->grad.begin(), s_->grad.end(), 0.0); }

Tensor Tensor::clone() const {
  Tensor t(rows(), cols(), std::vector<double>(s_->values), s_->requires_grad);
  t.s_->grad = s_->grad;
  return t;
}

}  // namespace connectome::ad
