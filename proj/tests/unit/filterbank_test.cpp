#include <gtest/gtest.h>

#include <random>

#include "../oracle.hpp"
#include "cosub/filterbank.hpp"
#include "cosub/generators.hpp"

using namespace cosub;

namespace {

SubgraphPartition labels(std::vector<int> v) { return SubgraphPartition(v); }

GraphSignal random_signal(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  GraphSignal x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

double rel_error(const GraphSignal& a, const GraphSignal& b) { return (a - b).norm() / b.norm(); }

/// 14 nodes in subgraphs of sizes 4, 3, 3, 2, 2 chained A-B-C-D-E.
WeightedGraph chain_toy() {
  return WeightedGraph(14, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1},  // A: 4-cycle
                            {4, 5, 1}, {5, 6, 1},                        // B
                            {7, 8, 1}, {7, 9, 1}, {8, 9, 1},             // C
                            {10, 11, 1},                                 // D
                            {12, 13, 1},                                 // E
                            {3, 4, 1}, {6, 7, 1}, {9, 10, 1}, {11, 12, 1}});
}

std::vector<SubgraphPartition> chain_toy_partitions() {
  return {labels({0, 0, 0, 0, 1, 1, 1, 2, 2, 2, 3, 3, 4, 4}), labels({0, 0, 0, 1, 1}), labels({0, 0})};
}

}  // namespace

TEST(LevelOperators, ToyMatchesReferenceOperators) {
  const auto ops = build_operators(oracle::toy_graph(), labels({0, 0, 0, 1, 1}), Norm::L1);
  const auto ref = oracle::toy_reference_l1();
  ASSERT_EQ(ops.num_channels(), 3);
  for (int l = 0; l < 3; ++l) {
    EXPECT_LT(oracle::max_abs(ops.theta(l) - ref.theta[static_cast<std::size_t>(l)]), 1e-12) << "Theta " << l;
    EXPECT_LT(oracle::max_abs(ops.pi(l) - ref.pi[static_cast<std::size_t>(l)]), 1e-12) << "Pi " << l;
    EXPECT_EQ(ops.omega(l), ref.omega[static_cast<std::size_t>(l)]) << "Omega " << l;
  }
  EXPECT_EQ(std::vector<int>(ops.index_list(2).begin(), ops.index_list(2).end()), std::vector<int>{0});
}

TEST(LevelOperators, HaarEquivalence) {
  for (int n : {4, 8, 64}) {
    const auto ops = build_operators(line_graph(n), haar_partition(n), Norm::L2);
    ASSERT_EQ(ops.num_channels(), 2);
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n / 2, n), b = Eigen::MatrixXd::Zero(n / 2, n);
    for (int i = 0; i < n / 2; ++i) {
      l(i, 2 * i) = l(i, 2 * i + 1) = 1 / std::sqrt(2.0);
      b(i, 2 * i) = -1 / std::sqrt(2.0);
      b(i, 2 * i + 1) = 1 / std::sqrt(2.0);
    }
    EXPECT_LT(oracle::max_abs(ops.theta(0).transpose() - l), 1e-15);
    // The first non-zero entry is made positive: each row of B flips sign.
    EXPECT_LT(oracle::max_abs(ops.theta(1).transpose() + b), 1e-15);
  }
}

TEST(LevelOperators, SingletonsAreTheIdentity) {
  const auto ops = build_operators(oracle::toy_graph(), SubgraphPartition::singletons(5), Norm::L1);
  EXPECT_EQ(ops.num_channels(), 1);
  EXPECT_EQ(ops.theta(0), Eigen::MatrixXd::Identity(5, 5));
  EXPECT_EQ(ops.pi(0), Eigen::MatrixXd::Identity(5, 5));
}

TEST(LevelOperators, RejectsDisconnectedSubgraph) {
  EXPECT_THROW(build_operators(oracle::toy_graph(), labels({0, 1, 0, 1, 1}), Norm::L1), InputError);
}

TEST(LevelOperators, StructuralInvariants) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = sbm_graph({12, 20, 9, 15}, 0.4, 0.05, rng());
    PartitionConfig config;
    config.seed = rng();
    const auto c = louvain(g, config);
    for (Norm p : {Norm::L1, Norm::L2}) {
      const auto ops = build_operators(g, c, p);
      std::size_t total = 0;
      for (int l = 0; l < ops.num_channels(); ++l) {
        total += ops.index_list(l).size();
        if (l > 0) {
          EXPECT_LE(ops.index_list(l).size(), ops.index_list(l - 1).size());
        }
        // Every analysis column lives on one subgraph.
        const Eigen::MatrixXd t = ops.theta(l);
        for (Eigen::Index j = 0; j < t.cols(); ++j)
          for (Eigen::Index i = 0; i < t.rows(); ++i)
            if (t(i, j) != 0.0) {
              EXPECT_EQ(c.label(static_cast<int>(i)), ops.index_list(l)[static_cast<std::size_t>(j)]);
            }
      }
      EXPECT_EQ(ops.index_list(0).size(), static_cast<std::size_t>(c.num_subgraphs()));
      EXPECT_EQ(total, static_cast<std::size_t>(g.num_nodes()));
      const Eigen::MatrixXd theta = ops.analysis_stack();
      const Eigen::MatrixXd pi = ops.synthesis_stack();
      const auto id = Eigen::MatrixXd::Identity(g.num_nodes(), g.num_nodes());
      EXPECT_LT(oracle::max_abs(pi * theta.transpose() - id), 1e-10);
      if (p == Norm::L2) {
        EXPECT_LT(oracle::max_abs(theta.transpose() * theta - id), 1e-10);
      }
    }
  }
}

TEST(AnalyzeLevel, ToyExamples) {
  const auto g = oracle::toy_graph();
  const auto c = labels({0, 0, 0, 1, 1});
  const auto ops = build_operators(g, c, Norm::L1);
  const auto inter = split_adjacency(g, c).inter;

  GraphSignal x(5);
  x << 2.5, 2.5, 2.5, -1.25, -1.25;
  auto out = analyze_level(x, g, ops, inter);
  ASSERT_EQ(out.channels.size(), 3u);
  EXPECT_NEAR(out.channels[0][0], 2.5, 1e-15);
  EXPECT_NEAR(out.channels[0][1], -1.25, 1e-15);
  EXPECT_LT(out.channels[1].cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(out.channels[2].cwiseAbs().maxCoeff(), 1e-15);

  x << 1, -1, 0, 0, 0;
  out = analyze_level(x, g, ops, inter);
  EXPECT_LT(out.channels[0].cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(out.channels[1][0], 1.0, 1e-15);
  EXPECT_NEAR(out.channels[1][1], 0.0, 1e-15);
  EXPECT_NEAR(out.channels[2][0], 0.0, 1e-15);
  EXPECT_EQ(out.channels[0].size() + out.channels[1].size() + out.channels[2].size(), 5);

  EXPECT_EQ(out.coarse[0], WeightedGraph(2, {{0, 1, 1}}));
  EXPECT_EQ(out.coarse[1], WeightedGraph(2, {{0, 1, 1}}));
  EXPECT_EQ(out.coarse[2], WeightedGraph(1, {}));
  EXPECT_THROW(analyze_level(GraphSignal::Zero(4), g, ops, inter), InputError);
}

TEST(AnalyzeLevel, CoarseGraphsMatchDenseProducts) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = sbm_graph({10, 14, 6, 11}, 0.5, 0.1, rng());
    PartitionConfig config;
    config.seed = rng();
    const auto c = louvain(g, config);
    const auto ops = build_operators(g, c, Norm::L1);
    const auto inter = split_adjacency(g, c).inter;
    const auto out = analyze_level(random_signal(g.num_nodes(), rng()), g, ops, inter);
    for (int l = 0; l < ops.num_channels(); ++l) {
      Eigen::MatrixXd expected = ops.omega(l).transpose() * inter.dense_adjacency() * ops.omega(l);
      expected.diagonal().setZero();
      EXPECT_LT(oracle::max_abs(out.coarse[static_cast<std::size_t>(l)].dense_adjacency() - expected), 1e-12);
    }
  }
}

TEST(SynthesizeLevel, RoundTripAndEdgeCases) {
  const auto g = oracle::toy_graph();
  const auto c = labels({0, 0, 0, 1, 1});
  for (Norm p : {Norm::L1, Norm::L2}) {
    const auto ops = build_operators(g, c, p);
    const auto inter = split_adjacency(g, c).inter;
    const GraphSignal x = random_signal(5, 3);
    const auto out = analyze_level(x, g, ops, inter);
    EXPECT_LT((synthesize_level(out.channels, ops) - x).cwiseAbs().maxCoeff(), 1e-10);

    std::vector<Eigen::VectorXd> zeros;
    for (const auto& ch : out.channels) zeros.push_back(Eigen::VectorXd::Zero(ch.size()));
    EXPECT_EQ(synthesize_level(zeros, ops), GraphSignal::Zero(5));

    const GraphSignal constant = GraphSignal::Constant(5, 0.7);
    EXPECT_LT((synthesize_level(ops.analyze(constant), ops) - constant).cwiseAbs().maxCoeff(), 1e-15);

    zeros.pop_back();
    EXPECT_THROW(synthesize_level(zeros, ops), InputError);
  }
}

TEST(Cascade, ToySecondLevelOperators) {
  const CascadeConfig config{fixed_partitioner({labels({0, 0, 0, 1, 1}), labels({0, 0})}), Norm::L1, 5};
  const auto p = analyze_cascade(oracle::toy_graph(), random_signal(5, 1), config);
  ASSERT_EQ(p.levels.size(), 2u);
  const auto& ops = p.levels[1].operators;
  EXPECT_LT(oracle::max_abs(ops.theta(0) - Eigen::Vector2d(0.5, 0.5)), 1e-15);
  EXPECT_LT(oracle::max_abs(ops.theta(1) - Eigen::Vector2d(0.5, -0.5)), 1e-15);
  EXPECT_EQ(p.approximation.size(), 1);
}

TEST(Cascade, ChainToyShapes) {
  const GraphSignal x = random_signal(14, 8);
  const CascadeConfig config{fixed_partitioner(chain_toy_partitions()), Norm::L1, 3};
  const auto p = analyze_cascade(chain_toy(), x, config);
  ASSERT_EQ(p.levels.size(), 3u);
  auto sizes = [&](std::size_t j) {
    std::vector<Eigen::Index> s;
    for (std::size_t l = 1; l < p.levels[j].channels.size(); ++l) s.push_back(p.levels[j].channels[l].size());
    return s;
  };
  EXPECT_EQ(sizes(0), (std::vector<Eigen::Index>{5, 3, 1}));
  EXPECT_EQ(sizes(1), (std::vector<Eigen::Index>{2, 1}));
  EXPECT_EQ(sizes(2), (std::vector<Eigen::Index>{1}));
  EXPECT_EQ(p.approximation.size(), 1);
  EXPECT_EQ(p.detail_count(), 13u);
  EXPECT_LT(rel_error(synthesize_cascade(p), x), 1e-12);
  // The level-2 input graph is the path of the five supernodes.
  EXPECT_EQ(p.levels[0].coarse[0], line_graph(5));
}

TEST(Cascade, StopsOnSingleNodeAndNoProgress) {
  const CascadeConfig louvain_config{louvain_partitioner({}), Norm::L1, 10};
  const auto single = analyze_cascade(WeightedGraph(1, {}), GraphSignal::Ones(1), louvain_config);
  EXPECT_TRUE(single.levels.empty());
  EXPECT_EQ(synthesize_cascade(single), GraphSignal::Ones(1));

  const CascadeConfig identity{fixed_partitioner({SubgraphPartition::singletons(5)}), Norm::L1, 3};
  EXPECT_TRUE(analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(5), identity).levels.empty());

  const CascadeConfig short_list{fixed_partitioner({labels({0, 0, 0, 1, 1})}), Norm::L1, 3};
  EXPECT_EQ(analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(5), short_list).levels.size(), 1u);

  // Louvain on a graph it cannot coarsen any further stops at the single supernode.
  const auto deep = analyze_cascade(sbm_graph({20, 20}, 0.5, 0.05, 3), random_signal(40, 2), louvain_config);
  EXPECT_LT(deep.levels.size(), 10u);
}

TEST(Cascade, RejectsBadInput) {
  const CascadeConfig wrong_size{fixed_partitioner({labels({0, 0, 0, 1})}), Norm::L1, 1};
  EXPECT_THROW(analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(5), wrong_size), InputError);
  EXPECT_THROW(analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(4), wrong_size), InputError);
  EXPECT_THROW(analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(5), CascadeConfig{}), InputError);
}

TEST(Cascade, PerfectReconstructionOnSbm) {
  const auto g = sbm_graph({30, 30, 30}, 0.3, 0.02, 5);
  for (Norm p : {Norm::L1, Norm::L2}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      PartitionConfig config;
      config.seed = seed;
      const GraphSignal x = random_signal(90, seed + 100);
      const auto pyr = analyze_cascade(g, x, {louvain_partitioner(config), p, 3});
      EXPECT_LT(rel_error(synthesize_cascade(pyr), x), 1e-9);
      for (const auto& lv : pyr.levels) {
        Eigen::Index total = 0;
        for (const auto& ch : lv.channels) total += ch.size();
        EXPECT_EQ(total, lv.input_size());
      }
    }
  }
}

TEST(Cascade, LocallyConstantSignalNeedsNoDetails) {
  const auto g = sbm_graph({30, 30, 30}, 0.3, 0.02, 5);
  PartitionConfig config;
  const auto c1 = louvain(g, config);
  GraphSignal x(90);
  for (int i = 0; i < 90; ++i) x[i] = 1.0 + c1.label(i);
  const auto pyr = analyze_cascade(g, x, {fixed_partitioner({c1}), Norm::L1, 1});
  for (std::size_t l = 1; l < pyr.levels[0].channels.size(); ++l)
    EXPECT_LT(pyr.levels[0].channels[l].cwiseAbs().maxCoeff(), 1e-13);
  Pyramid zeroed = pyr;
  for (std::size_t l = 1; l < zeroed.levels[0].channels.size(); ++l) zeroed.levels[0].channels[l].setZero();
  EXPECT_LT((synthesize_cascade(zeroed) - x).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Cascade, EdgeAwareUsesApproximationAtDeeperLevels) {
  const auto g = sbm_graph({25, 25, 25, 25}, 0.3, 0.02, 9);
  PartitionConfig config;
  config.edge_aware = true;
  std::vector<GraphSignal> seen;
  auto recording = [&](const WeightedGraph& graph, const GraphSignal& s, std::size_t level) {
    seen.push_back(s);
    return louvain_partitioner(config)(graph, s, level);
  };
  const GraphSignal x = random_signal(100, 4);
  const auto pyr = analyze_cascade(g, x, {recording, Norm::L1, 2});
  ASSERT_GE(pyr.levels.size(), 2u);
  EXPECT_EQ(seen[0], x);
  EXPECT_EQ(seen[1], pyr.levels[0].channels[0]);
}

TEST(Cascade, Truncation) {
  const auto g = chain_toy();
  const GraphSignal x = random_signal(14, 8);
  const auto p = analyze_cascade(g, x, {fixed_partitioner(chain_toy_partitions()), Norm::L2, 3});
  const auto t = p.truncated(1);
  EXPECT_EQ(t.levels.size(), 1u);
  EXPECT_EQ(t.approximation, p.levels[0].channels[0]);
  EXPECT_LT(rel_error(synthesize_cascade(t), x), 1e-12);
  EXPECT_THROW(p.truncated(0), InputError);
  EXPECT_THROW(p.truncated(4), InputError);
}
