// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "connectome/data/connectome_graph.hpp"

namespace connectome::data {

/// Symmetric n x n correlation matrix with unit diagonal and entries in [-1, 1].
class CorrelationMatrix {
 public:
  /// Validates the invariants; throws ContractError on violation.
  CorrelationMatrix(std::size_t n, std::vector<double> values);

  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t u, std::size_t v) const { return values_[u * n_ + v]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Pearson correlation between the rows of an n x t row-major series.
/// Throws DegenerateSeriesError for a zero-variance row, ConfigError for t < 2.
CorrelationMatrix pearson_correlation(std::span<const double> series, std::size_t n, std::size_t t);

/// Thresholds positive correlations into edges: (u, v) with u < v is kept
/// iff C[u, v] > threshold, weighted by C[u, v]. Node features are the first
/// `feature_dim` columns of C (all n when feature_dim is 0).
ConnectomeGraph build_graph(const CorrelationMatrix& corr, double threshold, int label, std::size_t feature_dim = 0);

}  // namespace connectome::data
