// Copyright 2026 The Connectome Bench Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>

#include "connectome/common/errors.hpp"
#include "connectome/data/edge_drop.hpp"
#include "connectome/models/attention.hpp"
#include "connectome/models/attn_residual_gcn.hpp"
#include "connectome/models/checkpoint.hpp"
#include "connectome/models/expander.hpp"
#include "connectome/models/exphormer.hpp"
#include "connectome/models/gcn.hpp"
#include "connectome/models/interaction_graph.hpp"
#include "connectome/models/residual_gcn.hpp"
#include "oracles.hpp"

namespace connectome::models {
namespace {

using testing::permute_graph;
using testing::random_graph;
using testing::random_permutation;

data::ConnectomeGraph graph_from(std::size_t n, std::size_t d, std::vector<double> x,
                                 std::vector<data::UndirectedEdge> edges) {
  data::ConnectomeGraph g;
  g.n = n;
  g.d = d;
  g.x = std::move(x);
  g.edges = std::move(edges);
  g.weights.assign(g.edges.size(), 1.0);
  return g;
}

ad::Tensor identity(std::size_t n) {
  ad::Tensor t(n, n);
  for (std::size_t i = 0; i < n; ++i) t.mutable_values()[i * n + i] = 1.0;
  return t;
}

ModelSpec small_gcn_spec() {
  ModelSpec spec;
  spec.kind = ModelKind::residual_gcn;
  spec.gcn.num_gcn_layers = 2;
  spec.gcn.hidden_dim = 5;
  spec.gcn.mlp_hidden = 4;
  return spec;
}

ModelSpec small_exphormer_spec() {
  ModelSpec spec;
  spec.kind = ModelKind::exphormer;
  spec.exphormer.num_layers = 2;
  spec.exphormer.num_heads = 2;
  spec.exphormer.hidden_dim = 4;
  spec.exphormer.expander_degree = 2;
  spec.exphormer.num_global_nodes = 1;
  return spec;
}

std::vector<double> logits_of(const Model& model, const PreparedGraph& g, ForwardContext ctx = {}) {
  ad::Tape tape(false);
  auto out = model.forward(tape, g, ctx);
  return {out.values().begin(), out.values().end()};
}

// Real node v becomes perm[v]; virtual nodes keep their index.
InteractionGraph permute_interaction(const InteractionGraph& ig, const std::vector<std::uint32_t>& perm) {
  auto map = [&](std::uint32_t v) { return v < ig.num_real ? perm[v] : v; };
  std::vector<std::pair<ad::Edge, EdgeKind>> edges;
  for (std::size_t i = 0; i < ig.edges.size(); ++i) {
    edges.push_back({{map(ig.edges[i].src), map(ig.edges[i].dst)}, ig.kinds[i]});
  }
  std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
    return std::pair(a.first.dst, a.first.src) < std::pair(b.first.dst, b.first.src);
  });
  InteractionGraph out;
  out.num_real = ig.num_real;
  out.num_global = ig.num_global;
  for (const auto& [e, kind] : edges) {
    out.edges.push_back(e);
    out.kinds.push_back(kind);
    out.destinations.push_back(e.dst);
  }
  return out;
}

// ---------------------------------------------------------------- gcn_layer

TEST(GcnLayer, EmptyEdgeSetReducesToReluOfHW) {
  auto g = graph_from(1, 2, {1.0, -1.0}, {});
  ad::Tape tape;
  auto out = gcn_layer(tape, g, node_features(g), identity(2));
  EXPECT_EQ(out(0, 0), 1.0);
  EXPECT_EQ(out(0, 1), 0.0);
}

TEST(GcnLayer, TwoNodeEdgeAveragesBothRows) {
  auto g = graph_from(2, 2, {1.0, 0.0, 0.0, 1.0}, {{0, 1}});
  ad::Tape tape;
  auto out = gcn_layer(tape, g, node_features(g), identity(2));
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(out(r, c), 0.5, 1e-15);
  }
}

TEST(GcnLayer, ShapeMismatchIsDimensionError) {
  auto g = graph_from(2, 2, {1.0, 0.0, 0.0, 1.0}, {{0, 1}});
  ad::Tape tape;
  EXPECT_THROW(gcn_layer(tape, g, node_features(g), identity(3)), DimensionError);
  EXPECT_THROW(gcn_layer(tape, g, ad::Tensor(3, 2), identity(2)), DimensionError);
}

TEST(GcnLayer, MatchesDenseNormalizedPropagation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_graph(12, 3, 0.3, rng);
    for (bool weighted : {false, true}) {
      auto w = testing::random_tensor(3, 4, rng, false);
      ad::Tape tape;
      auto out = gcn_layer(tape, g, node_features(g), w, weighted);
      const Eigen::MatrixXd expected =
          (testing::dense_normalized_adjacency(g, weighted) * testing::to_eigen(node_features(g)) *
           testing::to_eigen(w))
              .cwiseMax(0.0);
      EXPECT_LT((testing::to_eigen(out) - expected).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(GcnLayer, CommutesWithNodePermutation) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(15, 4, 0.25, rng);
    auto perm = random_permutation(g.n, rng);
    auto pg = permute_graph(g, perm);
    auto w = testing::random_tensor(4, 3, rng, false);
    ad::Tape tape;
    auto out = gcn_layer(tape, g, node_features(g), w);
    auto out_p = gcn_layer(tape, pg, node_features(pg), w);
    for (std::size_t v = 0; v < g.n; ++v) {
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(out_p(perm[v], c), out(v, c), 1e-10);
    }
  }
}

TEST(GcnLayer, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  auto g = random_graph(6, 3, 0.5, rng);
  auto h = testing::random_tensor(6, 3, rng);
  auto w = testing::random_tensor(3, 2, rng);
  auto check = testing::check_gradients(
      [&](ad::Tape& tape) { return testing::project(tape, gcn_layer(tape, g, h, w), 9); }, {h, w});
  EXPECT_LT(check.max_rel_error, 1e-4);
}

// ------------------------------------------------------------- ResidualGCN

TEST(ResidualGCN, EvalForwardIsBitIdentical) {
  std::mt19937_64 rng(6);
  auto g = random_graph(20, 4, 0.2, rng, 1);
  auto model = make_model(small_gcn_spec(), 4, 3, 11);
  auto pg = model->prepare(g, 0);
  EXPECT_EQ(logits_of(*model, pg), logits_of(*model, pg));
}

TEST(ResidualGCN, MatchesDenseReference) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    auto g = random_graph(10 + trial, 4, 0.3, rng);
    auto model = make_model(small_gcn_spec(), 4, 3, 100 + trial);
    const auto logits = logits_of(*model, model->prepare(g, 0));
    const auto expected = testing::residual_gcn_reference(model->params(), g, 2, true);
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(logits[c], expected(static_cast<Eigen::Index>(c)), 1e-10);
  }
}

TEST(ResidualGCN, FullyDroppedGraphMatchesSelfLoopOnlyReference) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = data::drop_edges(random_graph(16, 4, 0.4, rng), 1.0, static_cast<std::uint64_t>(trial));
    ASSERT_TRUE(g.edges.empty());
    auto model = make_model(small_gcn_spec(), 4, 2, static_cast<std::uint64_t>(trial));
    const auto logits = logits_of(*model, model->prepare(g, 0));
    const auto expected = testing::residual_gcn_reference(model->params(), g, 2, true);
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(logits[c], expected(static_cast<Eigen::Index>(c)), 1e-10);
  }
}

TEST(ResidualGCN, LogitsArePermutationInvariant) {
  std::mt19937_64 rng(9);
  auto model = make_model(small_gcn_spec(), 3, 2, 5);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = random_graph(18, 3, 0.3, rng);
    auto pg = permute_graph(g, random_permutation(g.n, rng));
    const auto a = logits_of(*model, model->prepare(g, 0));
    const auto b = logits_of(*model, model->prepare(pg, 0));
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(a[c], b[c], 1e-8);
  }
}

TEST(ResidualGCN, FeatureWidthMismatchIsDimensionError) {
  std::mt19937_64 rng(10);
  auto model = make_model(small_gcn_spec(), 4, 2, 1);
  auto pg = model->prepare(random_graph(5, 3, 0.5, rng), 0);
  ad::Tape tape(false);
  ForwardContext ctx;
  EXPECT_THROW(model->forward(tape, pg, ctx), DimensionError);
}

TEST(ResidualGCN, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = random_graph(6, 3, 0.5, rng, trial % 2);
    auto model = make_model(small_gcn_spec(), 3, 2, static_cast<std::uint64_t>(trial));
    auto pg = model->prepare(g, 0);
    const int label = g.label;
    auto check = testing::check_gradients(
        [&](ad::Tape& tape) {
          ForwardContext ctx{ad::Mode::train, 42, nullptr};
          return ad::cross_entropy(tape, model->forward(tape, pg, ctx), std::span(&label, 1));
        },
        model->params().tensors());
    EXPECT_LT(check.max_rel_error, 1e-4) << "trial " << trial;
  }
}

TEST(ResidualGCN, InvalidConfigIsConfigError) {
  ResidualGCNConfig c;
  c.num_gcn_layers = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.dropout = 1.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

// ---------------------------------------------------------------- expander

TEST(Expander, DegreeTwoOnFiveNodesIsOneCycle) {
  auto edges = build_expander(5, 2, 1);
  EXPECT_EQ(edges.size(), 5u);
  std::vector<int> deg(5, 0);
  for (const auto& e : edges) {
    ++deg[e.u];
    ++deg[e.v];
  }
  EXPECT_EQ(deg, std::vector<int>(5, 2));
  EXPECT_TRUE(testing::is_connected(5, edges));
}

TEST(Expander, FiftyNodesDegreeFourIsConnectedWithBoundedDegree) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto edges = build_expander(50, 4, seed);
    EXPECT_TRUE(testing::is_connected(50, edges));
    std::vector<int> deg(50, 0);
    for (const auto& e : edges) {
      EXPECT_LT(e.u, e.v);
      ++deg[e.u];
      ++deg[e.v];
    }
    for (int d : deg) {
      EXPECT_GE(d, 2);
      EXPECT_LE(d, 4);
    }
  }
}

TEST(Expander, HundredSeedsAreConnected) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 3 + seed % 60;
    const std::size_t degree = 2 + 2 * (seed % 3);
    EXPECT_TRUE(testing::is_connected(n, build_expander(n, degree, seed))) << "seed " << seed;
  }
}

TEST(Expander, SpectralGapAtHundredNodesDegreeSix) {
  EXPECT_LT(testing::second_eigenvalue_magnitude(100, build_expander(100, 6, 0)), 0.95);
}

TEST(Expander, DeterministicPerSeed) {
  EXPECT_EQ(build_expander(40, 4, 9), build_expander(40, 4, 9));
  EXPECT_NE(build_expander(40, 4, 9), build_expander(40, 4, 10));
}

TEST(Expander, InvalidArgumentsAreConfigErrors) {
  EXPECT_THROW(build_expander(10, 3, 0), ConfigError);
  EXPECT_THROW(build_expander(10, 0, 0), ConfigError);
  EXPECT_THROW(build_expander(2, 2, 0), ConfigError);
}

// -------------------------------------------------------- interaction graph

TEST(InteractionGraph, EmptyGraphWithOneGlobalNode) {
  auto g = graph_from(4, 1, {0, 0, 0, 0}, {});
  auto ig = build_interaction_graph(g, 2, 1, 3);
  EXPECT_EQ(ig.count(EdgeKind::local), 0u);
  EXPECT_EQ(ig.count(EdgeKind::global), 8u);
  EXPECT_LE(ig.count(EdgeKind::expander), 8u);
  EXPECT_EQ(ig.count(EdgeKind::self_loop), 5u);
  EXPECT_EQ(ig.num_nodes(), 5u);
  EXPECT_TRUE(ig.is_virtual(4));
  EXPECT_FALSE(ig.is_virtual(3));
}

TEST(InteractionGraph, TriangleLocalEdgesAbsorbExpander) {
  auto g = graph_from(3, 1, {0, 0, 0}, {{0, 1}, {0, 2}, {1, 2}});
  auto ig = build_interaction_graph(g, 2, 0, 5);
  EXPECT_EQ(ig.count(EdgeKind::local), 6u);
  EXPECT_EQ(ig.count(EdgeKind::expander), 0u);
  EXPECT_EQ(ig.count(EdgeKind::self_loop), 3u);
  EXPECT_EQ(ig.edges.size(), 9u);
}

TEST(InteractionGraph, RandomGraphsRespectBudgetAndComponents) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    const std::size_t degree = 2 * (1 + rng() % 3);
    const std::size_t globals = rng() % 3;
    auto g = random_graph(n, 1, std::uniform_real_distribution<double>(0.0, 1.0)(rng), rng);
    auto ig = build_interaction_graph(g, degree, globals, static_cast<std::uint64_t>(trial));

    EXPECT_LE(ig.edges.size(), 2 * g.edges.size() + degree * n + 2 * globals * n + n + globals);
    EXPECT_EQ(ig.count(EdgeKind::global), 2 * globals * n);
    EXPECT_LE(ig.count(EdgeKind::expander), degree * n);
    EXPECT_EQ(ig.count(EdgeKind::local), 2 * g.edges.size());
    EXPECT_EQ(ig.count(EdgeKind::self_loop), n + globals);
    ASSERT_EQ(ig.kinds.size(), ig.edges.size());
    ASSERT_EQ(ig.destinations.size(), ig.edges.size());

    std::set<std::pair<std::uint32_t, std::uint32_t>> input;
    for (const auto& e : g.edges) {
      input.insert({e.u, e.v});
      input.insert({e.v, e.u});
    }
    for (std::size_t i = 0; i < ig.edges.size(); ++i) {
      const auto& e = ig.edges[i];
      EXPECT_EQ(ig.destinations[i], e.dst);
      if (i > 0) {
        EXPECT_LT(std::pair(ig.edges[i - 1].dst, ig.edges[i - 1].src), std::pair(e.dst, e.src));
      }
      switch (ig.kinds[i]) {
        case EdgeKind::local:
          EXPECT_TRUE(input.count({e.src, e.dst}));
          break;
        case EdgeKind::expander:
          EXPECT_FALSE(input.count({e.src, e.dst}));
          EXPECT_FALSE(ig.is_virtual(e.src) || ig.is_virtual(e.dst));
          break;
        case EdgeKind::global:
          EXPECT_NE(ig.is_virtual(e.src), ig.is_virtual(e.dst));
          break;
        case EdgeKind::self_loop:
          EXPECT_EQ(e.src, e.dst);
          break;
      }
    }
  }
}

TEST(InteractionGraph, LocalOnlyGraphHasLocalEdgesAndSelfLoops) {
  std::mt19937_64 rng(13);
  auto g = random_graph(10, 1, 0.3, rng);
  auto ig = build_local_interaction_graph(g);
  EXPECT_EQ(ig.num_global, 0u);
  EXPECT_EQ(ig.edges.size(), 2 * g.edges.size() + 10);
  EXPECT_EQ(ig.count(EdgeKind::expander), 0u);
}

TEST(InteractionGraph, KindNames) {
  EXPECT_EQ(to_string(EdgeKind::local), "local");
  EXPECT_EQ(to_string(EdgeKind::expander), "expander");
  EXPECT_EQ(to_string(EdgeKind::global), "global");
  EXPECT_EQ(to_string(EdgeKind::self_loop), "self_loop");
}

// --------------------------------------------------------------- attention

struct AttentionFixture {
  ad::ParamStore store;
  AttentionConfig config;
  AttentionParams params;

  explicit AttentionFixture(std::uint64_t seed) {
    config.dim = 4;
    config.heads = 2;
    params = AttentionParams::create(store, "attn", config, seed);
  }
};

TEST(SparseAttention, IdenticalKeysGiveUniformWeights) {
  AttentionFixture f(1);
  for (double& v : f.params.key.mutable_values()) v = 0.0;
  std::mt19937_64 rng(14);
  auto g = random_graph(8, 1, 0.4, rng);
  auto ig = build_interaction_graph(g, 2, 1, 0);
  auto h = testing::random_tensor(ig.num_nodes(), 4, rng, false);
  ad::Tape tape(false);
  auto out = sparse_attention_layer(tape, ig, h, f.params, f.config, {}, "attn");
  std::map<std::uint32_t, double> in_degree;
  for (const auto& e : ig.edges) in_degree[e.dst] += 1.0;
  for (std::size_t i = 0; i < ig.edges.size(); ++i) {
    for (std::size_t head = 0; head < 2; ++head) {
      EXPECT_NEAR(out.weights(i, head), 1.0 / in_degree[ig.edges[i].dst], 1e-15);
    }
  }
}

TEST(SparseAttention, WeightsIntoEveryNodeSumToOne) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    AttentionFixture f(static_cast<std::uint64_t>(trial));
    auto g = random_graph(12, 1, 0.3, rng);
    auto ig = build_interaction_graph(g, 4, 2, static_cast<std::uint64_t>(trial));
    auto h = testing::random_tensor(ig.num_nodes(), 4, rng, false, -3.0, 3.0);
    ad::Tape tape(false);
    auto out = sparse_attention_layer(tape, ig, h, f.params, f.config, {}, "attn");
    std::vector<double> sums(ig.num_nodes() * 2, 0.0);
    for (std::size_t i = 0; i < ig.edges.size(); ++i) {
      for (std::size_t head = 0; head < 2; ++head) sums[ig.edges[i].dst * 2 + head] += out.weights(i, head);
    }
    for (double s : sums) EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST(SparseAttention, CommutesWithNodePermutation) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 10; ++trial) {
    AttentionFixture f(static_cast<std::uint64_t>(trial));
    auto g = random_graph(10, 1, 0.3, rng);
    auto ig = build_interaction_graph(g, 2, 1, static_cast<std::uint64_t>(trial));
    auto perm = random_permutation(g.n, rng);
    auto ig_p = permute_interaction(ig, perm);
    auto h = testing::random_tensor(ig.num_nodes(), 4, rng, false);
    ad::Tensor h_p(h.rows(), 4);
    for (std::uint32_t v = 0; v < ig.num_nodes(); ++v) {
      const std::uint32_t to = v < g.n ? perm[v] : v;
      for (std::size_t c = 0; c < 4; ++c) h_p.mutable_values()[to * 4 + c] = h(v, c);
    }
    ad::Tape tape(false);
    auto out = sparse_attention_layer(tape, ig, h, f.params, f.config, {}, "attn").output;
    auto out_p = sparse_attention_layer(tape, ig_p, h_p, f.params, f.config, {}, "attn").output;
    for (std::uint32_t v = 0; v < ig.num_nodes(); ++v) {
      const std::uint32_t to = v < g.n ? perm[v] : v;
      for (std::size_t c = 0; c < 4; ++c) EXPECT_NEAR(out_p(to, c), out(v, c), 1e-8);
    }
  }
}

TEST(SparseAttention, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(17);
  AttentionFixture f(3);
  auto g = random_graph(5, 1, 0.5, rng);
  auto ig = build_interaction_graph(g, 2, 1, 0);
  auto h = testing::random_tensor(ig.num_nodes(), 4, rng);
  std::vector<ad::Tensor> inputs = f.store.tensors();
  inputs.push_back(h);
  auto check = testing::check_gradients(
      [&](ad::Tape& tape) {
        ForwardContext ctx{ad::Mode::train, 5, nullptr};
        return testing::project(tape, sparse_attention_layer(tape, ig, h, f.params, f.config, ctx, "attn").output, 3);
      },
      inputs);
  EXPECT_LT(check.max_rel_error, 1e-4);
}

TEST(SparseAttention, WidthNotDivisibleByHeadsIsDimensionError) {
  AttentionFixture f(1);
  auto config = f.config;
  config.heads = 3;
  auto g = graph_from(2, 1, {0, 0}, {});
  auto ig = build_local_interaction_graph(g);
  ad::Tape tape(false);
  EXPECT_THROW(sparse_attention_layer(tape, ig, ad::Tensor(2, 4), f.params, config, {}, "attn"), DimensionError);
  EXPECT_THROW(sparse_attention_layer(tape, ig, ad::Tensor(3, 4), f.params, f.config, {}, "attn"), DimensionError);
}

// --------------------------------------------------------------- Exphormer

TEST(Exphormer, EvalForwardIsBitIdentical) {
  std::mt19937_64 rng(18);
  auto model = make_model(small_exphormer_spec(), 3, 2, 4);
  auto pg = model->prepare(random_graph(12, 3, 0.3, rng), 7);
  EXPECT_EQ(logits_of(*model, pg), logits_of(*model, pg));
}

TEST(Exphormer, FullyDroppedGraphStillProducesLogits) {
  std::mt19937_64 rng(19);
  auto model = make_model(small_exphormer_spec(), 3, 2, 4);
  auto g = data::drop_edges(random_graph(12, 3, 0.3, rng), 1.0, 0);
  auto pg = model->prepare(g, 7);
  EXPECT_EQ(pg.interaction.count(EdgeKind::local), 0u);
  EXPECT_GT(pg.interaction.count(EdgeKind::expander), 0u);
  EXPECT_EQ(pg.interaction.count(EdgeKind::global), 24u);
  ad::Tape tape(false);
  ForwardContext ctx;
  auto logits = model->forward(tape, pg, ctx);
  EXPECT_EQ(logits.shape(), (ad::Shape{1, 2}));
  for (double v : logits.values()) EXPECT_TRUE(std::isfinite(v));
}

TEST(Exphormer, DegreeEncodingAppendsLogOnePlusDegree) {
  auto g = graph_from(3, 1, {1, 2, 3}, {{0, 1}, {0, 2}});
  auto f = degree_encoded_features(g);
  ASSERT_EQ(f.shape(), (ad::Shape{3, 2}));
  EXPECT_EQ(f(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(f(0, 1), std::log(3.0));
  EXPECT_DOUBLE_EQ(f(1, 1), std::log(2.0));
}

TEST(Exphormer, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(20);
  for (int trial = 0; trial < 5; ++trial) {
    auto g = random_graph(6, 3, 0.4, rng, trial % 2);
    auto model = make_model(small_exphormer_spec(), 3, 2, static_cast<std::uint64_t>(trial));
    auto pg = model->prepare(g, static_cast<std::uint64_t>(trial));
    const int label = g.label;
    auto check = testing::check_gradients(
        [&](ad::Tape& tape) {
          ForwardContext ctx{ad::Mode::train, 17, nullptr};
          return ad::cross_entropy(tape, model->forward(tape, pg, ctx), std::span(&label, 1));
        },
        model->params().tensors());
    EXPECT_LT(check.max_rel_error, 1e-4) << "trial " << trial;
  }
}

TEST(Exphormer, HiddenWidthMustSplitAcrossHeads) {
  ExphormerConfig c;
  c.hidden_dim = 10;
  c.num_heads = 4;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.expander_degree = 3;
  EXPECT_THROW(c.validate(), ConfigError);
}

// ---------------------------------------------------------- attn variants

ModelSpec variant_spec(AttnPlacement placement, double probability) {
  ModelSpec spec = small_gcn_spec();
  spec.kind = ModelKind::attn_residual_gcn;
  spec.gcn.hidden_dim = 4;
  spec.variant.placement = placement;
  spec.variant.apply_probability = probability;
  spec.variant.num_heads = 2;
  return spec;
}

TEST(AttnVariant, ZeroProbabilityMatchesPlainResidualGCN) {
  std::mt19937_64 rng(21);
  ModelSpec plain = variant_spec(AttnPlacement::after_each_gcn, 0.0);
  plain.kind = ModelKind::residual_gcn;
  for (auto placement : {AttnPlacement::after_each_gcn, AttnPlacement::after_concat}) {
    auto variant = make_model(variant_spec(placement, 0.0), 3, 2, 8);
    auto base = make_model(plain, 3, 2, 8);
    auto g = random_graph(10, 3, 0.3, rng);
    auto pv = variant->prepare(g, 0);
    auto pb = base->prepare(g, 0);
    EXPECT_EQ(logits_of(*variant, pv), logits_of(*base, pb));
    const ForwardContext train{ad::Mode::train, 99, nullptr};
    EXPECT_EQ(logits_of(*variant, pv, train), logits_of(*base, pb, train));
  }
}

TEST(AttnVariant, AfterConcatAppliesExactlyOncePerForward) {
  std::mt19937_64 rng(22);
  auto model = make_model(variant_spec(AttnPlacement::after_concat, 1.0), 3, 2, 8);
  auto pg = model->prepare(random_graph(10, 3, 0.3, rng), 0);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    ForwardStats stats;
    ad::Tape tape(false);
    ForwardContext ctx{ad::Mode::train, seed, &stats};
    model->forward(tape, pg, ctx);
    EXPECT_EQ(stats.forwards, 1u);
    EXPECT_EQ(stats.attention_applications, 1u);
  }
}

TEST(AttnVariant, AfterEachGcnAppliesOncePerLayer) {
  std::mt19937_64 rng(23);
  auto model = make_model(variant_spec(AttnPlacement::after_each_gcn, 1.0), 3, 2, 8);
  auto pg = model->prepare(random_graph(10, 3, 0.3, rng), 0);
  ForwardStats stats;
  ad::Tape tape(false);
  ForwardContext ctx{ad::Mode::train, 0, &stats};
  model->forward(tape, pg, ctx);
  EXPECT_EQ(stats.attention_applications, 2u);
}

TEST(AttnVariant, HalfProbabilityApplicationCountIsBinomial) {
  std::mt19937_64 rng(24);
  auto model = make_model(variant_spec(AttnPlacement::after_concat, 0.5), 3, 2, 8);
  auto pg = model->prepare(random_graph(6, 3, 0.3, rng), 0);
  ForwardStats stats;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ad::Tape tape(false);
    ForwardContext ctx{ad::Mode::train, seed, &stats};
    model->forward(tape, pg, ctx);
  }
  EXPECT_EQ(stats.forwards, 1000u);
  const double sigma = std::sqrt(1000 * 0.25);
  EXPECT_LE(std::abs(static_cast<double>(stats.attention_applications) - 500.0), 3.0 * sigma);
}

TEST(AttnVariant, EvalModeAppliesWheneverProbabilityIsPositive) {
  std::mt19937_64 rng(25);
  auto model = make_model(variant_spec(AttnPlacement::after_concat, 0.01), 3, 2, 8);
  auto pg = model->prepare(random_graph(6, 3, 0.3, rng), 0);
  ForwardStats stats;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ad::Tape tape(false);
    ForwardContext ctx{ad::Mode::eval, seed, &stats};
    model->forward(tape, pg, ctx);
  }
  EXPECT_EQ(stats.attention_applications, 20u);
}

TEST(AttnVariant, ProbabilityOutsideUnitIntervalIsConfigError) {
  AttnVariantConfig c;
  c.apply_probability = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c.apply_probability = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(AttnVariant, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(26);
  for (auto placement : {AttnPlacement::after_each_gcn, AttnPlacement::after_concat}) {
    auto g = random_graph(6, 3, 0.5, rng, 1);
    auto model = make_model(variant_spec(placement, 1.0), 3, 2, 2);
    auto pg = model->prepare(g, 0);
    const int label = g.label;
    auto check = testing::check_gradients(
        [&](ad::Tape& tape) {
          ForwardContext ctx{ad::Mode::train, 3, nullptr};
          return ad::cross_entropy(tape, model->forward(tape, pg, ctx), std::span(&label, 1));
        },
        model->params().tensors());
    EXPECT_LT(check.max_rel_error, 1e-4);
  }
}

// ------------------------------------------------------------ model specs

TEST(ModelSpec, JsonRoundTrip) {
  for (auto spec : {small_gcn_spec(), small_exphormer_spec(), variant_spec(AttnPlacement::after_each_gcn, 0.5)}) {
    const auto j = spec.to_json();
    EXPECT_EQ(ModelSpec::from_json(nlohmann::json::parse(j.dump())).to_json(), j);
  }
}

TEST(ModelSpec, KindNamesParseBothSpellings) {
  EXPECT_EQ(parse_model_kind("residual-gcn"), ModelKind::residual_gcn);
  EXPECT_EQ(parse_model_kind("residual_gcn"), ModelKind::residual_gcn);
  EXPECT_EQ(parse_model_kind("attn-residual-gcn"), ModelKind::attn_residual_gcn);
  EXPECT_EQ(to_string(ModelKind::exphormer), "exphormer");
  EXPECT_THROW(parse_model_kind("gat"), ConfigError);
  EXPECT_EQ(parse_attn_placement(to_string(AttnPlacement::after_concat)), AttnPlacement::after_concat);
}

TEST(ModelSpec, MalformedJsonIsConfigError) {
  EXPECT_THROW(ModelSpec::from_json(nlohmann::json{{"kind", 3}}), ConfigError);
  EXPECT_THROW(ModelSpec::from_json(nlohmann::json{{"kind", "gat"}}), ConfigError);
}

// ------------------------------------------------------------- checkpoint

TEST(Checkpoint, RoundTripIsBitExact) {
  const auto path = std::filesystem::temp_directory_path() / "connectome_models_test.ckpt";
  auto model = make_model(small_exphormer_spec(), 3, 2, 1);
  save_checkpoint(path, model->params(), model->config_json());
  auto loaded = load_checkpoint(path);
  EXPECT_EQ(loaded.config, model->config_json());

  auto other = make_model(small_exphormer_spec(), 3, 2, 2);
  restore_params(other->params(), loaded);
  const auto& a = model->params().entries();
  const auto& b = other->params().entries();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].name, b[i].name);
    EXPECT_TRUE(std::equal(a[i].tensor.values().begin(), a[i].tensor.values().end(),
                           b[i].tensor.values().begin(), b[i].tensor.values().end()));
  }
  std::filesystem::remove(path);
}

TEST(Checkpoint, BadMagicIsParseError) {
  const auto path = std::filesystem::temp_directory_path() / "connectome_models_test_bad.ckpt";
  std::ofstream(path, std::ios::binary) << "NOTACKPTxxxxxxxxxxxxxxxx";
  EXPECT_THROW(load_checkpoint(path), ParseError);
  std::filesystem::remove(path);
}

TEST(Checkpoint, TruncatedFileIsParseError) {
  const auto path = std::filesystem::temp_directory_path() / "connectome_models_test_trunc.ckpt";
  auto model = make_model(small_gcn_spec(), 3, 2, 1);
  save_checkpoint(path, model->params(), model->config_json());
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 4);
  EXPECT_THROW(load_checkpoint(path), ParseError);
  std::filesystem::remove(path);
}

TEST(Checkpoint, MissingFileIsIoError) {
  EXPECT_THROW(load_checkpoint("/nonexistent/dir/model.ckpt"), IoError);
}

TEST(Checkpoint, ShapeMismatchOnRestoreIsRejected) {
  const auto path = std::filesystem::temp_directory_path() / "connectome_models_test_shape.ckpt";
  auto model = make_model(small_gcn_spec(), 3, 2, 1);
  save_checkpoint(path, model->params(), model->config_json());
  auto wider = make_model(small_gcn_spec(), 4, 2, 1);
  EXPECT_THROW(restore_params(wider->params(), load_checkpoint(path)), DimensionError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace connectome::models
