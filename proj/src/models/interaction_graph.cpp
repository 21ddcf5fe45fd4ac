// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include "connectome/models/interaction_graph.hpp"

#include <algorithm>
#include <tuple>

#include "connectome/models/expander.hpp"

namespace connectome::models {

namespace {

struct Candidate {
  ad::Edge edge;
  EdgeKind kind;
};

InteractionGraph assemble(std::size_t num_real, std::size_t num_global, std::vector<Candidate> candidates) {
  // Sort by (dst, src, kind) so the highest-priority kind of each pair comes first.
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.edge.dst, a.edge.src, a.kind) < std::tie(b.edge.dst, b.edge.src, b.kind);
  });
  InteractionGraph ig;
  ig.num_real = num_real;
  ig.num_global = num_global;
  for (const auto& c : candidates) {
    if (!ig.edges.empty() && ig.edges.back() == c.edge) continue;
    ig.edges.push_back(c.edge);
    ig.kinds.push_back(c.kind);
    ig.destinations.push_back(c.edge.dst);
  }
  return ig;
}

void add_local(const data::ConnectomeGraph& g, std::vector<Candidate>& out) {
  for (const auto& e : g.edges) {
    out.push_back({{e.u, e.v}, EdgeKind::local});
    out.push_back({{e.v, e.u}, EdgeKind::local});
  }
}

void add_self_loops(std::size_t nodes, std::vector<Candidate>& out) {
  for (std::uint32_t v = 0; v < nodes; ++v) out.push_back({{v, v}, EdgeKind::self_loop});
}

}  // namespace

std::string to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::local:
      return "local";
    case EdgeKind::expander:
      return "expander";
    case EdgeKind::global:
      return "global";
    case EdgeKind::self_loop:
      return "self_loop";
  }
  return "unknown";
}

std::size_t InteractionGraph::count(EdgeKind kind) const noexcept {
  return static_cast<std::size_t>(std::count(kinds.begin(), kinds.end(), kind));
}

InteractionGraph build_interaction_graph(const data::ConnectomeGraph& g, std::size_t expander_degree,
                                         std::size_t num_global, std::uint64_t seed) {
  const std::size_t n = g.n;
  std::vector<Candidate> candidates;
  candidates.reserve(2 * g.edges.size() + expander_degree * n + 2 * num_global * n + n + num_global);
  add_local(g, candidates);
  if (n >= 3) {
    for (const auto& e : build_expander(n, expander_degree, seed)) {
      candidates.push_back({{e.u, e.v}, EdgeKind::expander});
      candidates.push_back({{e.v, e.u}, EdgeKind::expander});
    }
  }
  for (std::size_t k = 0; k < num_global; ++k) {
    const auto virtual_node = static_cast<std::uint32_t>(n + k);
    for (std::uint32_t v = 0; v < n; ++v) {
      candidates.push_back({{virtual_node, v}, EdgeKind::global});
      candidates.push_back({{v, virtual_node}, EdgeKind::global});
    }
  }
  add_self_loops(n + num_global, candidates);
  return assemble(n, num_global, std::move(candidates));
}

InteractionGraph build_local_interaction_graph(const data::ConnectomeGraph& g) {
  std::vector<Candidate> candidates;
  candidates.reserve(2 * g.edges.size() + g.n);
  add_local(g, candidates);
  add_self_loops(g.n, candidates);
  return assemble(g.n, 0, std::move(candidates));
}

}  // namespace connectome::models
