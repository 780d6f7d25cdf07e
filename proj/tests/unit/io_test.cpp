#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "../oracle.hpp"
#include "cosub/generators.hpp"
#include "cosub/io.hpp"
#include "cosub/manifest.hpp"

using namespace cosub;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cosub_io_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(EdgeList, ParsesCommentsDefaultsAndDeclaredSize) {
  const auto g = io::parse_edge_list("# toy\n0\t1\n1 2 2.5\n\n# nodes: 5\n");
  EXPECT_EQ(g, WeightedGraph(5, {{0, 1, 1.0}, {1, 2, 2.5}}));
  EXPECT_EQ(io::parse_edge_list("0\t1\n").num_nodes(), 2);
  EXPECT_EQ(io::parse_edge_list("0\t1\n", "x", 4).num_nodes(), 4);
}

TEST(EdgeList, RejectsMalformedLines) {
  EXPECT_THROW(io::parse_edge_list("0\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("0 1 x\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("0 1 -2\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("1 1\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("0 1\n1 0\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("-1 2\n"), InputError);
  EXPECT_THROW(io::parse_edge_list("0 5\n# nodes: 3\n"), InputError);
  try {
    io::parse_edge_list("0 1\n0 1 2 3\n", "edges.tsv");
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("edges.tsv:2"), std::string::npos);
  }
}

TEST(EdgeList, RoundTripIsExact) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(1e-3, 1e3);
  std::vector<Edge> edges;
  for (int u = 0; u < 30; ++u)
    for (int v = u + 1; v < 30; ++v)
      if (rng() % 5 == 0) edges.push_back({u, v, w(rng)});
  const WeightedGraph g(33, edges);
  EXPECT_EQ(io::parse_edge_list(io::format_edge_list(g)), g);
}

TEST(Signal, RoundTripIsExact) {
  const Eigen::Vector4d x(0.1, -1e-300, 12345.678901234567, 1.0 / 3.0);
  EXPECT_EQ(io::parse_signal(io::format_signal(x)), x);
  EXPECT_THROW(io::parse_signal("1\nfoo\n"), InputError);
  EXPECT_THROW(io::parse_signal("1 2\n"), InputError);
  EXPECT_THROW(io::parse_signal("inf\n"), InputError);
  EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

TEST(Partition, OneAndZeroBased) {
  EXPECT_EQ(io::parse_partition("1\n1\n2\n"), SubgraphPartition(std::vector<int>{0, 0, 1}));
  EXPECT_EQ(io::parse_partition("0\n1\n1\n", true), SubgraphPartition(std::vector<int>{0, 1, 1}));
  EXPECT_THROW(io::parse_partition("0\n1\n"), InputError);
  EXPECT_THROW(io::parse_partition("1\n3\n"), InputError);
  EXPECT_EQ(io::format_partition(SubgraphPartition(std::vector<int>{4, 4, 2})), "1\n1\n2\n");
}

TEST(Digest, Fnv1a) {
  EXPECT_EQ(io::digest(""), "cbf29ce484222325");
  EXPECT_EQ(io::digest("a"), "af63dc4c8601ec8c");
}

TEST(Manifest, RoundTripIsBitExact) {
  const auto dir = scratch("roundtrip");
  const auto g = sbm_graph({25, 25, 30}, 0.3, 0.03, 2);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> d;
  GraphSignal x(80);
  for (auto& v : x) v = d(rng);
  PartitionConfig config;
  config.seed = 3;
  for (Norm p : {Norm::L1, Norm::L2}) {
    const auto pyr = analyze_cascade(g, x, {louvain_partitioner(config), p, 3});
    const auto path = save_pyramid(pyr, dir / (p == Norm::L1 ? "l1" : "l2"));
    const auto loaded = load_pyramid(path);
    EXPECT_EQ(synthesize_cascade(loaded.pyramid), synthesize_cascade(pyr));
    ASSERT_EQ(loaded.pyramid.levels.size(), pyr.levels.size());
    for (std::size_t j = 0; j < pyr.levels.size(); ++j) {
      EXPECT_EQ(loaded.pyramid.levels[j].partition, pyr.levels[j].partition);
      EXPECT_EQ(loaded.pyramid.levels[j].coarse[0], pyr.levels[j].coarse[0]);
      EXPECT_EQ(loaded.pyramid.levels[j].operators.analysis_stack(), pyr.levels[j].operators.analysis_stack());
    }
  }
}

TEST(Manifest, MissingOrInconsistentArtifacts) {
  const auto dir = scratch("broken");
  const CascadeConfig config{fixed_partitioner({SubgraphPartition(std::vector<int>{0, 0, 0, 1, 1})}), Norm::L1, 1};
  const auto pyr = analyze_cascade(oracle::toy_graph(), GraphSignal::Ones(5), config);

  const auto missing = save_pyramid(pyr, dir / "missing");
  fs::remove(dir / "missing" / "level_1" / "channel_2.csv");
  EXPECT_THROW(load_pyramid(missing), InputError);

  const auto wrong = save_pyramid(pyr, dir / "wrong");
  io::write_file((dir / "wrong" / "level_1" / "partition.txt").string(), "1\n1\n2\n2\n2\n");
  EXPECT_THROW(load_pyramid(wrong), InputError);

  const auto shortened = save_pyramid(pyr, dir / "short");
  io::write_file((dir / "short" / "level_1" / "channel_3.csv").string(), "");
  EXPECT_THROW(load_pyramid(shortened), InputError);

  io::write_file((dir / "garbage.json").string(), "{not json");
  EXPECT_THROW(load_pyramid(dir / "garbage.json"), InputError);
  EXPECT_THROW(load_pyramid(dir / "absent.json"), InputError);
}
