// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace connectome::ad {

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const noexcept { return rows * cols; }
  bool operator==(const Shape&) const = default;
};

std::string to_string(Shape s);

/// Dense row-major matrix of doubles with an optional gradient buffer.
///
/// Tensor is a handle: copies share storage, which is what lets the tape
/// route gradients back to parameters. Use `clone()` for a deep copy.
class Tensor {
 public:
  Tensor();
  Tensor(std::size_t rows, std::size_t cols, bool requires_grad = false);
  Tensor(std::size_t rows, std::size_t cols, std::vector<double> values, bool requires_grad = false);

  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows, bool requires_grad = false);
  static Tensor full(std::size_t rows, std::size_t cols, double value, bool requires_grad = false);

  std::size_t rows() const noexcept { return s_->shape.rows; }
  std::size_t cols() const noexcept { return s_->shape.cols; }
  std::size_t size() const noexcept { return s_->values.size(); }
  Shape shape() const noexcept { return s_->shape; }

  std::span<const double> values() const noexcept { return s_->values; }
  std::span<double> mutable_values() noexcept { return s_->values; }
  double operator()(std::size_t r, std::size_t c) const { return s_->values[r * cols() + c]; }
  double item() const;

  bool requires_grad() const noexcept { return s_->requires_grad; }
  void set_requires_grad(bool on) noexcept { s_->requires_grad = on; }

  /// True once a gradient buffer has been allocated (by backward or grad_buffer()).
  bool has_grad() const noexcept { return !s_->grad.empty() || size() == 0; }
  std::span<const double> grad() const noexcept { return s_->grad; }
  /// Gradient buffer, allocated zero-filled on first access.
  std::span<double> grad_buffer() const;
  void zero_grad() noexcept;

  Tensor clone() const;
  bool shares_storage(const Tensor& other) const noexcept { return s_ == other.s_; }

 private:
  struct Storage {
    Shape shape;
    std::vector<double> values;
    std::vector<double> grad;
    bool requires_grad = false;
  };
  std::shared_ptr<Storage> s_;
};

}  // namespace connectome::ad
