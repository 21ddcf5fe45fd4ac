// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/data/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "connectome/common/errors.hpp"

namespace connectome::data {

CorrelationMatrix::CorrelationMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != n * n) {
    throw ContractError("correlation matrix needs " + std::to_string(n * n) + " values, got " +
                        std::to_string(values_.size()));
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (values_[u * n + u] != 1.0) throw ContractError("correlation diagonal entry " + std::to_string(u) + " is not 1");
    for (std::size_t v = 0; v < n; ++v) {
      const double c = values_[u * n + v];
      if (!(c >= -1.0 && c <= 1.0)) throw ContractError("correlation entry outside [-1, 1]");
      if (std::abs(c - values_[v * n + u]) > 1e-12) throw ContractError("correlation matrix is not symmetric");
    }
  }
}

CorrelationMatrix pearson_correlation(std::span<const double> series, std::size_t n, std::size_t t) {
  if (t < 2) throw ConfigError("pearson_correlation needs at least 2 samples per series");
  if (series.size() != n * t) throw DimensionError("time series size does not match n x t");

  std::vector<double> centered(series.begin(), series.end());
  std::vector<double> norm(n);
  for (std::size_t r = 0; r < n; ++r) {
    double* row = centered.data() + r * t;
    double mean = 0.0;
    for (std::size_t i = 0; i < t; ++i) mean += row[i];
    mean /= static_cast<double>(t);
    double ss = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      row[i] -= mean;
      ss += row[i] * row[i];
    }
    if (!(ss > 0.0)) throw DegenerateSeriesError(r);
    norm[r] = std::sqrt(ss);
  }

  std::vector<double> c(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    c[u * n + u] = 1.0;
    for (std::size_t v = u + 1; v < n; ++v) {
      double cov = 0.0;
      for (std::size_t i = 0; i < t; ++i) cov += centered[u * t + i] * centered[v * t + i];
      const double r = std::clamp(cov / (norm[u] * norm[v]), -1.0, 1.0);
      c[u * n + v] = r;
      c[v * n + u] = r;
    }
  }
  return CorrelationMatrix(n, std::move(c));
}

ConnectomeGraph build_graph(const CorrelationMatrix& corr, double threshold, int label, std::size_t feature_dim) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw ConfigError("threshold " + std::to_string(threshold) + " not in (0, 1)");
  }
  const std::size_t n = corr.n();
  const std::size_t d = feature_dim == 0 ? n : feature_dim;
  if (d > n) throw ConfigError("feature_dim " + std::to_string(d) + " exceeds node count " + std::to_string(n));

  ConnectomeGraph g;
  g.n = n;
  g.d = d;
  g.label = label;
  g.x.reserve(n * d);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t j = 0; j < d; ++j) g.x.push_back(corr(u, j));
  }
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (corr(u, v) > threshold) {
        g.edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)});
        g.weights.push_back(corr(u, v));
      }
    }
  }
  return g;
}

}  // namespace connectome::data
