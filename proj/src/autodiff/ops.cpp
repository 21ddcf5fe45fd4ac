// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/autodiff/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>

#include "connectome/common/errors.hpp"
#include "connectome/common/random.hpp"

namespace connectome::ad {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMatrix>;
using MutMap = Eigen::Map<RowMatrix>;

ConstMap view(std::span<const double> data, std::size_t rows, std::size_t cols) {
  return ConstMap(data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

template <int N>
Eigen::Map<const Eigen::Matrix<double, N, 1>> segment(const double* data, std::size_t size) {
  return {data, static_cast<Eigen::Index>(size)};
}

template <int N>
Eigen::Map<Eigen::Matrix<double, N, 1>> segment(double* data, std::size_t size) {
  return {data, static_cast<Eigen::Index>(size)};
}

// Calls fn with a compile-time head width for common sizes, Eigen::Dynamic otherwise.
template <typename Fn>
void with_head_width(std::size_t hd, Fn&& fn) {
  switch (hd) {
    case 8:
      fn(std::integral_constant<int, 8>{});
      break;
    case 16:
      fn(std::integral_constant<int, 16>{});
      break;
    case 32:
      fn(std::integral_constant<int, 32>{});
      break;
    default:
      fn(std::integral_constant<int, Eigen::Dynamic>{});
  }
}

MutMap view(std::span<double> data, std::size_t rows, std::size_t cols) {
  return MutMap(data.data(), static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

void require_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + to_string(a.shape()) + " vs " + to_string(b.shape()));
  }
}

void check_edges(std::span<const Edge> edges, std::size_t src_limit, std::size_t dst_limit, const char* op) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].src >= src_limit || edges[e].dst >= dst_limit) {
      throw IndexError(std::string(op) + ": edge " + std::to_string(e) + " (" + std::to_string(edges[e].src) + " -> " +
                       std::to_string(edges[e].dst) + ") out of range for " + std::to_string(src_limit) + " nodes");
    }
  }
}

/// Edge visiting order sorted by (dst, src); identity when already sorted.
std::vector<std::uint32_t> reduction_order(std::span<const Edge> edges) {
  std::vector<std::uint32_t> order(edges.size());
  std::iota(order.begin(), order.end(), 0u);
  if (!is_dst_sorted(edges)) {
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::tie(edges[a].dst, edges[a].src) < std::tie(edges[b].dst, edges[b].src);
    });
  }
  return order;
}

}  // namespace

bool is_dst_sorted(std::span<const Edge> edges) noexcept {
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (std::tie(edges[i - 1].dst, edges[i - 1].src) > std::tie(edges[i].dst, edges[i].src)) return false;
  }
  return true;
}

Tensor matmul(Tape& tape, const Tensor& a, const Tensor& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: inner dimensions disagree, " + to_string(a.shape()) + " x " + to_string(b.shape()));
  }
  Tensor out(a.rows(), b.cols());
  view(out.mutable_values(), a.rows(), b.cols()).noalias() =
      view(a.values(), a.rows(), a.cols()) * view(b.values(), b.rows(), b.cols());
  tape.record("matmul", {a, b}, out, [a, b, out]() mutable {
    auto dc = view(out.grad(), out.rows(), out.cols());
    if (a.requires_grad()) {
      view(a.grad_buffer(), a.rows(), a.cols()).noalias() += dc * view(b.values(), b.rows(), b.cols()).transpose();
    }
    if (b.requires_grad()) {
      view(b.grad_buffer(), b.rows(), b.cols()).noalias() += view(a.values(), a.rows(), a.cols()).transpose() * dc;
    }
  });
  return out;
}

Tensor add(Tape& tape, const Tensor& a, const Tensor& b) {
  require_same_shape(a, b, "add");
  Tensor out(a.rows(), a.cols());
  auto o = out.mutable_values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = a.values()[i] + b.values()[i];
  tape.record("add", {a, b}, out, [a, b, out]() mutable {
    for (const Tensor* t : {&a, &b}) {
      if (!t->requires_grad()) continue;
      auto g = t->grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += out.grad()[i];
    }
  });
  return out;
}

Tensor add_row(Tape& tape, const Tensor& x, const Tensor& bias) {
  if (bias.rows() != 1 || bias.cols() != x.cols()) {
    throw DimensionError("add_row: bias " + to_string(bias.shape()) + " does not fit " + to_string(x.shape()));
  }
  Tensor out(x.rows(), x.cols());
  const std::size_t cols = x.cols();
  auto o = out.mutable_values();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) o[r * cols + c] = x.values()[r * cols + c] + bias.values()[c];
  }
  tape.record("add_row", {x, bias}, out, [x, bias, out]() mutable {
    const std::size_t cols = x.cols();
    auto g = out.grad();
    if (x.requires_grad()) {
      auto gx = x.grad_buffer();
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (bias.requires_grad()) {
      auto gb = bias.grad_buffer();
      for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t c = 0; c < cols; ++c) gb[c] += g[r * cols + c];
      }
    }
  });
  return out;
}

Tensor scale(Tape& tape, const Tensor& x, double factor) {
  Tensor out(x.rows(), x.cols());
  auto o = out.mutable_values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = x.values()[i] * factor;
  tape.record("scale", {x}, out, [x, out, factor]() mutable {
    auto gx = x.grad_buffer();
    for (std::size_t i = 0; i < gx.size(); ++i) gx[i] += out.grad()[i] * factor;
  });
  return out;
}

Tensor relu(Tape& tape, const Tensor& x) {
  Tensor out(x.rows(), x.cols());
  auto o = out.mutable_values();
  // NaN passes through so divergence stays visible in the loss.
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = std::max(x.values()[i], 0.0);
  tape.record("relu", {x}, out, [x, out]() mutable {
    auto gx = x.grad_buffer();
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (x.values()[i] > 0.0) gx[i] += out.grad()[i];
    }
  });
  return out;
}

Tensor sum(Tape& tape, const Tensor& x) {
  Tensor out(1, 1);
  double total = 0.0;
  for (double v : x.values()) total += v;
  out.mutable_values()[0] = total;
  tape.record("sum", {x}, out, [x, out]() mutable {
    const double g = out.grad()[0];
    for (double& gx : x.grad_buffer()) gx += g;
  });
  return out;
}

Tensor concat_cols(Tape& tape, std::span<const Tensor> parts) {
  if (parts.empty()) throw DimensionError("concat_cols: no inputs");
  const std::size_t rows = parts.front().rows();
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) {
      throw DimensionError("concat_cols: row mismatch " + to_string(parts.front().shape()) + " vs " +
                           to_string(p.shape()));
    }
    cols += p.cols();
  }
  Tensor out(rows, cols);
  auto o = out.mutable_values();
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < rows; ++r) {
      std::copy_n(p.values().begin() + static_cast<std::ptrdiff_t>(r * p.cols()), p.cols(),
                  o.begin() + static_cast<std::ptrdiff_t>(r * cols + offset));
    }
    offset += p.cols();
  }
  std::vector<Tensor> inputs(parts.begin(), parts.end());
  tape.record("concat_cols", inputs, out, [inputs, out]() mutable {
    const std::size_t cols = out.cols();
    std::size_t offset = 0;
    for (auto& p : inputs) {
      if (p.requires_grad()) {
        auto gp = p.grad_buffer();
        for (std::size_t r = 0; r < out.rows(); ++r) {
          for (std::size_t c = 0; c < p.cols(); ++c) gp[r * p.cols() + c] += out.grad()[r * cols + offset + c];
        }
      }
      offset += p.cols();
    }
  });
  return out;
}

Tensor concat_rows(Tape& tape, const Tensor& top, const Tensor& bottom) {
  if (top.cols() != bottom.cols()) {
    throw DimensionError("concat_rows: column mismatch " + to_string(top.shape()) + " vs " + to_string(bottom.shape()));
  }
  std::vector<double> values(top.values().begin(), top.values().end());
  values.insert(values.end(), bottom.values().begin(), bottom.values().end());
  Tensor out(top.rows() + bottom.rows(), top.cols(), std::move(values));
  tape.record("concat_rows", {top, bottom}, out, [top, bottom, out]() mutable {
    const auto g = out.grad();
    if (top.requires_grad()) {
      auto gt = top.grad_buffer();
      for (std::size_t i = 0; i < gt.size(); ++i) gt[i] += g[i];
    }
    if (bottom.requires_grad()) {
      auto gb = bottom.grad_buffer();
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[top.size() + i];
    }
  });
  return out;
}

Tensor slice_rows(Tape& tape, const Tensor& x, std::size_t begin, std::size_t end) {
  if (begin > end || end > x.rows()) {
    throw IndexError("slice_rows: [" + std::to_string(begin) + ", " + std::to_string(end) + ") outside " +
                     to_string(x.shape()));
  }
  const auto first = x.values().begin() + static_cast<std::ptrdiff_t>(begin * x.cols());
  const auto last = x.values().begin() + static_cast<std::ptrdiff_t>(end * x.cols());
  Tensor out(end - begin, x.cols(), std::vector<double>(first, last));
  tape.record("slice_rows", {x}, out, [x, out, begin]() mutable {
    auto gx = x.grad_buffer();
    const std::size_t offset = begin * x.cols();
    for (std::size_t i = 0; i < out.size(); ++i) gx[offset + i] += out.grad()[i];
  });
  return out;
}

Tensor mean_pool_rows(Tape& tape, const Tensor& x) {
  if (x.rows() == 0) throw DimensionError("mean_pool_rows: no rows to pool");
  Tensor out(1, x.cols());
  auto o = out.mutable_values();
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < x.cols(); ++c) o[c] += x.values()[r * x.cols() + c];
  }
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (double& v : o) v *= inv;
  tape.record("mean_pool_rows", {x}, out, [x, out, inv]() mutable {
    auto gx = x.grad_buffer();
    for (std::size_t r = 0; r < x.rows(); ++r) {
      for (std::size_t c = 0; c < x.cols(); ++c) gx[r * x.cols() + c] += out.grad()[c] * inv;
    }
  });
  return out;
}

Tensor dropout(Tape& tape, const Tensor& h, double rate, Mode mode, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rate " + std::to_string(rate) + " not in [0, 1)");
  if (mode == Mode::eval || rate == 0.0) return h;

  Rng rng(seed);
  const double keep_scale = 1.0 / (1.0 - rate);
  std::vector<double> mask(h.size());
  for (double& m : mask) m = uniform01(rng) >= rate ? keep_scale : 0.0;
  Tensor out(h.rows(), h.cols());
  auto o = out.mutable_values();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = h.values()[i] * mask[i];
  tape.record("dropout", {h}, out, [h, out, mask = std::move(mask)]() mutable {
    auto gh = h.grad_buffer();
    for (std::size_t i = 0; i < gh.size(); ++i) gh[i] += out.grad()[i] * mask[i];
  });
  return out;
}

Tensor sparse_aggregate(Tape& tape, std::span<const Edge> edges, std::span<const double> weights, const Tensor& h) {
  if (weights.size() != edges.size()) {
    throw DimensionError("sparse_aggregate: " + std::to_string(edges.size()) + " edges but " +
                         std::to_string(weights.size()) + " weights");
  }
  check_edges(edges, h.rows(), h.rows(), "sparse_aggregate");
  const std::size_t d = h.cols();
  auto order = reduction_order(edges);
  Tensor out(h.rows(), d);
  auto o = out.mutable_values();
  const auto hv = h.values();
  for (std::uint32_t e : order) {
    const double w = weights[e];
    const double* src = hv.data() + edges[e].src * d;
    double* dst = o.data() + edges[e].dst * d;
    for (std::size_t c = 0; c < d; ++c) dst[c] += w * src[c];
  }
  std::vector<Edge> saved_edges(edges.begin(), edges.end());
  std::vector<double> saved_weights(weights.begin(), weights.end());
  tape.record(
      "sparse_aggregate", {h}, out,
      [h, out, edges = std::move(saved_edges), weights = std::move(saved_weights), order = std::move(order)]() mutable {
        const std::size_t d = h.cols();
        auto gh = h.grad_buffer();
        const auto g = out.grad();
        for (std::uint32_t e : order) {
          const double w = weights[e];
          const double* gdst = g.data() + edges[e].dst * d;
          double* gsrc = gh.data() + edges[e].src * d;
          for (std::size_t c = 0; c < d; ++c) gsrc[c] += w * gdst[c];
        }
      });
  return out;
}

std::vector<double> segment_softmax(std::span<const double> scores, std::span<const std::uint32_t> segment_of,
                                    std::size_t num_segments) {
  if (scores.size() != segment_of.size()) {
    throw DimensionError("segment_softmax: " + std::to_string(scores.size()) + " scores but " +
                         std::to_string(segment_of.size()) + " segment ids");
  }
  std::vector<double> max(num_segments, -std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < scores.size(); ++e) {
    if (segment_of[e] >= num_segments) {
      throw IndexError("segment_softmax: segment " + std::to_string(segment_of[e]) +
                       " >= " + std::to_string(num_segments));
    }
    max[segment_of[e]] = std::max(max[segment_of[e]], scores[e]);
  }
  std::vector<double> out(scores.size());
  std::vector<double> denom(num_segments, 0.0);
  for (std::size_t e = 0; e < scores.size(); ++e) {
    out[e] = std::exp(scores[e] - max[segment_of[e]]);
    denom[segment_of[e]] += out[e];
  }
  for (std::size_t e = 0; e < scores.size(); ++e) out[e] /= denom[segment_of[e]];
  return out;
}

Tensor softmax_segments(Tape& tape, const Tensor& scores, std::span<const std::uint32_t> segment_of,
                        std::size_t num_segments) {
  if (scores.rows() != segment_of.size()) {
    throw DimensionError("softmax_segments: " + std::to_string(scores.rows()) + " score rows but " +
                         std::to_string(segment_of.size()) + " segment ids");
  }
  const std::size_t edges = scores.rows();
  const std::size_t heads = scores.cols();
  Tensor out(edges, heads);
  auto o = out.mutable_values();
  std::vector<double> column(edges);
  for (std::size_t h = 0; h < heads; ++h) {
    for (std::size_t e = 0; e < edges; ++e) column[e] = scores.values()[e * heads + h];
    const auto y = segment_softmax(column, segment_of, num_segments);
    for (std::size_t e = 0; e < edges; ++e) o[e * heads + h] = y[e];
  }
  std::vector<std::uint32_t> segments(segment_of.begin(), segment_of.end());
  tape.record("softmax_segments", {scores}, out, [scores, out, segments = std::move(segments), num_segments]() mutable {
    const std::size_t edges = out.rows();
    const std::size_t heads = out.cols();
    const auto y = out.values();
    const auto g = out.grad();
    auto gs = scores.grad_buffer();
    std::vector<double> dot(num_segments * heads, 0.0);
    for (std::size_t e = 0; e < edges; ++e) {
      for (std::size_t h = 0; h < heads; ++h) {
        dot[segments[e] * heads + h] += y[e * heads + h] * g[e * heads + h];
      }
    }
    for (std::size_t e = 0; e < edges; ++e) {
      for (std::size_t h = 0; h < heads; ++h) {
        const std::size_t i = e * heads + h;
        gs[i] += y[i] * (g[i] - dot[segments[e] * heads + h]);
      }
    }
  });
  return out;
}

Tensor edge_scores(Tape& tape, const Tensor& q, const Tensor& k, std::span<const Edge> edges, std::size_t heads,
                   double scale) {
  require_same_shape(q, k, "edge_scores");
  if (heads == 0 || q.cols() % heads != 0) {
    throw DimensionError("edge_scores: width " + std::to_string(q.cols()) + " not divisible by " +
                         std::to_string(heads) + " heads");
  }
  check_edges(edges, q.rows(), q.rows(), "edge_scores");
  const std::size_t d = q.cols();
  const std::size_t hd = d / heads;
  Tensor out(edges.size(), heads);
  auto o = out.mutable_values();
  const double* qv = q.values().data();
  const double* kv = k.values().data();
  with_head_width(hd, [&](auto width) {
    constexpr int N = decltype(width)::value;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const double* qd = qv + edges[e].dst * d;
      const double* ks = kv + edges[e].src * d;
      for (std::size_t h = 0; h < heads; ++h) {
        o[e * heads + h] = scale * segment<N>(qd + h * hd, hd).dot(segment<N>(ks + h * hd, hd));
      }
    }
  });
  std::vector<Edge> saved(edges.begin(), edges.end());
  tape.record("edge_scores", {q, k}, out, [q, k, out, edges = std::move(saved), heads, scale]() mutable {
    const std::size_t d = q.cols();
    const std::size_t hd = d / heads;
    const auto g = out.grad();
    double* gq = q.requires_grad() ? q.grad_buffer().data() : nullptr;
    double* gk = k.requires_grad() ? k.grad_buffer().data() : nullptr;
    const double* qv = q.values().data();
    const double* kv = k.values().data();
    with_head_width(hd, [&](auto width) {
      constexpr int N = decltype(width)::value;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const std::size_t qoff = edges[e].dst * d;
        const std::size_t koff = edges[e].src * d;
        for (std::size_t h = 0; h < heads; ++h) {
          const double ge = g[e * heads + h] * scale;
          if (ge == 0.0) continue;
          const std::size_t j = h * hd;
          if (gq) segment<N>(gq + qoff + j, hd) += ge * segment<N>(kv + koff + j, hd);
          if (gk) segment<N>(gk + koff + j, hd) += ge * segment<N>(qv + qoff + j, hd);
        }
      }
    });
  });
  return out;
}

Tensor attention_aggregate(Tape& tape, const Tensor& weights, const Tensor& v, std::span<const Edge> edges,
                           std::size_t heads, std::size_t num_nodes) {
  if (weights.rows() != edges.size() || weights.cols() != heads) {
    throw DimensionError("attention_aggregate: weights " + to_string(weights.shape()) + " vs " +
                         std::to_string(edges.size()) + " edges x " + std::to_string(heads) + " heads");
  }
  if (heads == 0 || v.cols() % heads != 0) {
    throw DimensionError("attention_aggregate: width " + std::to_string(v.cols()) + " not divisible by " +
                         std::to_string(heads) + " heads");
  }
  check_edges(edges, v.rows(), num_nodes, "attention_aggregate");
  const std::size_t d = v.cols();
  const std::size_t hd = d / heads;
  auto order = reduction_order(edges);
  Tensor out(num_nodes, d);
  auto o = out.mutable_values();
  const double* vv = v.values().data();
  const double* wv = weights.values().data();
  with_head_width(hd, [&](auto width) {
    constexpr int N = decltype(width)::value;
    for (std::uint32_t e : order) {
      const double* vs = vv + edges[e].src * d;
      double* od = o.data() + edges[e].dst * d;
      for (std::size_t h = 0; h < heads; ++h) {
        segment<N>(od + h * hd, hd) += wv[e * heads + h] * segment<N>(vs + h * hd, hd);
      }
    }
  });
  std::vector<Edge> saved(edges.begin(), edges.end());
  tape.record("attention_aggregate", {weights, v}, out,
              [weights, v, out, edges = std::move(saved), order = std::move(order), heads]() mutable {
                const std::size_t d = v.cols();
                const std::size_t hd = d / heads;
                const auto g = out.grad();
                double* gw = weights.requires_grad() ? weights.grad_buffer().data() : nullptr;
                double* gv = v.requires_grad() ? v.grad_buffer().data() : nullptr;
                const double* vv = v.values().data();
                const double* wv = weights.values().data();
                with_head_width(hd, [&](auto width) {
                  constexpr int N = decltype(width)::value;
                  for (std::uint32_t e : order) {
                    const std::size_t soff = edges[e].src * d;
                    const std::size_t doff = edges[e].dst * d;
                    for (std::size_t h = 0; h < heads; ++h) {
                      const std::size_t j = h * hd;
                      const auto gd = segment<N>(g.data() + doff + j, hd);
                      if (gw) gw[e * heads + h] += gd.dot(segment<N>(vv + soff + j, hd));
                      if (gv) segment<N>(gv + soff + j, hd) += wv[e * heads + h] * gd;
                    }
                  }
                });
              });
  return out;
}

Tensor layer_norm(Tape& tape, const Tensor& x, const Tensor& gain, const Tensor& bias, double eps) {
  if (gain.rows() != 1 || gain.cols() != x.cols() || bias.shape() != gain.shape()) {
    throw DimensionError("layer_norm: gain " + to_string(gain.shape()) + " / bias " + to_string(bias.shape()) +
                         " do not fit " + to_string(x.shape()));
  }
  const std::size_t rows = x.rows();
  const std::size_t cols = x.cols();
  std::vector<double> normalized(x.size());
  std::vector<double> inv_std(rows);
  Tensor out(rows, cols);
  auto o = out.mutable_values();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* xr = x.values().data() + r * cols;
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += xr[c];
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) var += (xr[c] - mean) * (xr[c] - mean);
    var /= static_cast<double>(cols);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < cols; ++c) {
      const double n = (xr[c] - mean) * inv_std[r];
      normalized[r * cols + c] = n;
      o[r * cols + c] = gain.values()[c] * n + bias.values()[c];
    }
  }
  tape.record("layer_norm", {x, gain, bias}, out,
              [x, gain, bias, out, normalized = std::move(normalized), inv_std = std::move(inv_std)]() mutable {
                const std::size_t rows = x.rows();
                const std::size_t cols = x.cols();
                const auto g = out.grad();
                if (gain.requires_grad() || bias.requires_grad()) {
                  std::span<double> gg = gain.requires_grad() ? gain.grad_buffer() : std::span<double>{};
                  std::span<double> gb = bias.requires_grad() ? bias.grad_buffer() : std::span<double>{};
                  for (std::size_t r = 0; r < rows; ++r) {
                    for (std::size_t c = 0; c < cols; ++c) {
                      if (!gg.empty()) gg[c] += g[r * cols + c] * normalized[r * cols + c];
                      if (!gb.empty()) gb[c] += g[r * cols + c];
                    }
                  }
                }
                if (!x.requires_grad()) return;
                auto gx = x.grad_buffer();
                const double inv_cols = 1.0 / static_cast<double>(cols);
                for (std::size_t r = 0; r < rows; ++r) {
                  double mean_dn = 0.0;
                  double mean_dn_n = 0.0;
                  for (std::size_t c = 0; c < cols; ++c) {
                    const double dn = g[r * cols + c] * gain.values()[c];
                    mean_dn += dn;
                    mean_dn_n += dn * normalized[r * cols + c];
                  }
                  mean_dn *= inv_cols;
                  mean_dn_n *= inv_cols;
                  for (std::size_t c = 0; c < cols; ++c) {
                    const double dn = g[r * cols + c] * gain.values()[c];
                    gx[r * cols + c] += inv_std[r] * (dn - mean_dn - normalized[r * cols + c] * mean_dn_n);
                  }
                }
              });
  return out;
}

Tensor cross_entropy(Tape& tape, const Tensor& logits, std::span<const int> labels) {
  if (labels.size() != logits.rows()) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for logits " +
                         to_string(logits.shape()));
  }
  if (logits.rows() == 0) throw DimensionError("cross_entropy: empty batch");
  const std::size_t b = logits.rows();
  const std::size_t c = logits.cols();
  std::vector<double> probs(logits.size());
  double loss = 0.0;
  for (std::size_t r = 0; r < b; ++r) {
    if (labels[r] < 0 || static_cast<std::size_t>(labels[r]) >= c) {
      throw IndexError("cross_entropy: label " + std::to_string(labels[r]) + " outside [0, " + std::to_string(c) + ")");
    }
    const double* lr = logits.values().data() + r * c;
    const double max = *std::max_element(lr, lr + c);
    double denom = 0.0;
    for (std::size_t j = 0; j < c; ++j) denom += std::exp(lr[j] - max);
    const double log_denom = std::log(denom);
    for (std::size_t j = 0; j < c; ++j) probs[r * c + j] = std::exp(lr[j] - max - log_denom);
    loss += -(lr[labels[r]] - max - log_denom);
  }
  Tensor out(1, 1);
  out.mutable_values()[0] = loss / static_cast<double>(b);
  std::vector<int> saved(labels.begin(), labels.end());
  tape.record("cross_entropy", {logits}, out,
              [logits, out, probs = std::move(probs), labels = std::move(saved)]() mutable {
                const std::size_t b = logits.rows();
                const std::size_t c = logits.cols();
                const double g = out.grad()[0] / static_cast<double>(b);
                auto gl = logits.grad_buffer();
                for (std::size_t r = 0; r < b; ++r) {
                  for (std::size_t j = 0; j < c; ++j) {
                    const double onehot = static_cast<std::size_t>(labels[r]) == j ? 1.0 : 0.0;
                    gl[r * c + j] += g * (probs[r * c + j] - onehot);
                  }
                }
              });
  return out;
}

}  // namespace connectome::ad
