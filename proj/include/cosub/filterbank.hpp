#pragma once

// Critically sampled filterbank on a partition in connected subgraphs.
//
// Channel l (0-based) of a level gathers, for every subgraph with more than l
// nodes, the l-th local Fourier mode of that subgraph. Channel 0 is the
// approximation; it lives on the coarsened graph whose supernodes are the
// subgraphs. Operators are kept as per-subgraph dense blocks; the N x N
// matrices are only materialized on request (for small-graph checks).

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cosub/detail/parallel.hpp"
#include "cosub/graph.hpp"
#include "cosub/partition.hpp"
#include "cosub/spectral.hpp"

namespace cosub {

struct SubgraphBlock {
  std::vector<int> nodes;  ///< ascending node indices of the subgraph
  LocalEigenBasis basis;
};

/// Analysis (Theta), synthesis (Pi) and group (Omega) operator families of one level.
class LevelOperators {
 public:
  LevelOperators() = default;

  /// Decomposes each subgraph Laplacian. Throws InputError unless `c` is a
  /// partition of `g` in connected subgraphs.
  LevelOperators(const WeightedGraph& g, const SubgraphPartition& c, Norm p) : n_(g.num_nodes()), norm_(p) {
    validate_partition(g, c);
    const auto k_count = static_cast<std::size_t>(c.num_subgraphs());
    blocks_.resize(k_count);
    detail::parallel_for(k_count, [&](std::size_t k) {
      const auto mem = c.members(static_cast<int>(k));
      blocks_[k].nodes.assign(mem.begin(), mem.end());
      blocks_[k].basis = local_eigenbasis(laplacian(extract_local_adjacency(g, c, static_cast<int>(k))), p);
    });
    const int channels = c.max_subgraph_size();
    index_lists_.resize(static_cast<std::size_t>(channels));
    for (std::size_t k = 0; k < k_count; ++k)
      for (std::size_t l = 0; l < blocks_[k].nodes.size(); ++l) index_lists_[l].push_back(static_cast<int>(k));
  }

  int num_nodes() const { return n_; }
  int num_subgraphs() const { return static_cast<int>(blocks_.size()); }
  /// Number of channels: the size of the largest subgraph.
  int num_channels() const { return static_cast<int>(index_lists_.size()); }
  Norm norm() const { return norm_; }

  std::span<const SubgraphBlock> blocks() const { return blocks_; }
  const SubgraphBlock& block(int k) const { return blocks_[static_cast<std::size_t>(k)]; }

  /// Subgraphs with more than `channel` nodes, ascending.
  std::span<const int> index_list(int channel) const { return index_lists_[static_cast<std::size_t>(channel)]; }

  std::vector<Eigen::VectorXd> analyze(const GraphSignal& x) const {
    if (x.size() != n_) throw InputError("analyze: signal length mismatch");
    std::vector<Eigen::VectorXd> out(index_lists_.size());
    for (std::size_t l = 0; l < index_lists_.size(); ++l) {
      const auto& ids = index_lists_[l];
      out[l].resize(static_cast<Eigen::Index>(ids.size()));
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto& b = blocks_[static_cast<std::size_t>(ids[j])];
        double acc = 0.0;
        for (std::size_t i = 0; i < b.nodes.size(); ++i)
          acc += b.basis.analysis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) * x[b.nodes[i]];
        out[l][static_cast<Eigen::Index>(j)] = acc;
      }
    }
    return out;
  }

  GraphSignal synthesize(std::span<const Eigen::VectorXd> channels) const {
    if (channels.size() != index_lists_.size()) throw InputError("synthesize: wrong number of channels");
    GraphSignal x = GraphSignal::Zero(n_);
    for (std::size_t l = 0; l < index_lists_.size(); ++l) {
      const auto& ids = index_lists_[l];
      if (static_cast<std::size_t>(channels[l].size()) != ids.size())
        throw InputError("synthesize: channel " + std::to_string(l) + " has the wrong length");
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto& b = blocks_[static_cast<std::size_t>(ids[j])];
        const double coef = channels[l][static_cast<Eigen::Index>(j)];
        for (std::size_t i = 0; i < b.nodes.size(); ++i)
          x[b.nodes[i]] += b.basis.synthesis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(l)) * coef;
      }
    }
    return x;
  }

  Eigen::MatrixXd theta(int channel) const { return materialize(channel, &LocalEigenBasis::analysis); }
  Eigen::MatrixXd pi(int channel) const { return materialize(channel, &LocalEigenBasis::synthesis); }

  Eigen::MatrixXd omega(int channel) const {
    const auto& ids = index_lists_[static_cast<std::size_t>(channel)];
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(ids.size()));
    for (std::size_t j = 0; j < ids.size(); ++j)
      for (int node : blocks_[static_cast<std::size_t>(ids[j])].nodes) m(node, static_cast<Eigen::Index>(j)) = 1.0;
    return m;
  }

  /// [Theta_1 ... Theta_N~] as one N x N matrix.
  Eigen::MatrixXd analysis_stack() const { return stack(&LevelOperators::theta); }
  /// [Pi_1 ... Pi_N~] as one N x N matrix.
  Eigen::MatrixXd synthesis_stack() const { return stack(&LevelOperators::pi); }

 private:
  Eigen::MatrixXd materialize(int channel, Eigen::MatrixXd LocalEigenBasis::*which) const {
    const auto& ids = index_lists_[static_cast<std::size_t>(channel)];
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, static_cast<Eigen::Index>(ids.size()));
    for (std::size_t j = 0; j < ids.size(); ++j) {
      const auto& b = blocks_[static_cast<std::size_t>(ids[j])];
      for (std::size_t i = 0; i < b.nodes.size(); ++i)
        m(b.nodes[i], static_cast<Eigen::Index>(j)) = (b.basis.*which)(static_cast<Eigen::Index>(i), channel);
    }
    return m;
  }

  Eigen::MatrixXd stack(Eigen::MatrixXd (LevelOperators::*part)(int) const) const {
    Eigen::MatrixXd m(n_, n_);
    Eigen::Index col = 0;
    for (int l = 0; l < num_channels(); ++l) {
      Eigen::MatrixXd block = (this->*part)(l);
      m.middleCols(col, block.cols()) = block;
      col += block.cols();
    }
    return m;
  }

  int n_ = 0;
  Norm norm_ = Norm::L1;
  std::vector<SubgraphBlock> blocks_;
  std::vector<std::vector<int>> index_lists_;
};

inline LevelOperators build_operators(const WeightedGraph& g, const SubgraphPartition& c, Norm p) {
  return LevelOperators(g, c, p);
}

struct LevelAnalysis {
  std::vector<Eigen::VectorXd> channels;  ///< x_l = Theta_l^T x
  std::vector<WeightedGraph> coarse;      ///< A_l = Omega_l^T A_ext Omega_l, zero diagonal
};

/// One analysis block. `inter` must be the inter-subgraph adjacency of
/// `graph` for the partition the operators were built from.
inline LevelAnalysis analyze_level(const GraphSignal& x, const WeightedGraph& graph, const LevelOperators& ops,
                                   const WeightedGraph& inter) {
  if (graph.num_nodes() != ops.num_nodes() || inter.num_nodes() != ops.num_nodes() || x.size() != ops.num_nodes())
    throw InputError("analyze_level: size mismatch");
  LevelAnalysis out;
  out.channels = ops.analyze(x);

  std::vector<int> label(static_cast<std::size_t>(ops.num_nodes()));
  for (int k = 0; k < ops.num_subgraphs(); ++k)
    for (int node : ops.block(k).nodes) label[static_cast<std::size_t>(node)] = k;

  // Inter edges at subgraph level, sorted so channel l only scans the prefix
  // whose endpoints both have more than l nodes.
  struct LabelEdge {
    Edge e;
    int reach;
  };
  std::vector<LabelEdge> edges;
  edges.reserve(inter.num_edges());
  for (const auto& e : inter.edges()) {
    const int a = label[static_cast<std::size_t>(e.u)];
    const int b = label[static_cast<std::size_t>(e.v)];
    if (a == b) throw InputError("analyze_level: inter adjacency contains an intra-subgraph edge");
    const int reach = std::min(static_cast<int>(ops.block(a).nodes.size()), static_cast<int>(ops.block(b).nodes.size()));
    edges.push_back({{a, b, e.weight}, reach});
  }
  std::stable_sort(edges.begin(), edges.end(), [](const LabelEdge& x, const LabelEdge& y) { return x.reach > y.reach; });
  std::vector<Edge> plain;
  plain.reserve(edges.size());
  for (const auto& le : edges) plain.push_back(le.e);

  std::vector<int> position(static_cast<std::size_t>(ops.num_subgraphs()), -1);
  std::size_t prefix = edges.size();
  for (int l = 0; l < ops.num_channels(); ++l) {
    while (prefix > 0 && edges[prefix - 1].reach <= l) --prefix;
    const auto ids = ops.index_list(l);
    std::fill(position.begin(), position.end(), -1);
    for (std::size_t j = 0; j < ids.size(); ++j) position[static_cast<std::size_t>(ids[j])] = static_cast<int>(j);
    out.coarse.push_back(detail::coarsen_edges(std::span<const Edge>(plain.data(), prefix), position,
                                               static_cast<int>(ids.size())));
  }
  return out;
}

/// x = sum_l Pi_l x_l.
inline GraphSignal synthesize_level(std::span<const Eigen::VectorXd> channels, const LevelOperators& ops) {
  return ops.synthesize(channels);
}

// ---------------------------------------------------------------------------
// Cascade
// ---------------------------------------------------------------------------

struct PyramidLevel {
  SubgraphPartition partition;
  WeightedGraph intra;  ///< A_int of the level's input graph
  WeightedGraph inter;  ///< A_ext of the level's input graph
  LevelOperators operators;
  std::vector<Eigen::VectorXd> channels;
  std::vector<WeightedGraph> coarse;  ///< coarse[0] is the next level's input graph

  int input_size() const { return partition.size(); }
};

/// Output of the analysis cascade. Synthesis only reads `approximation` and
/// the detail channels (l >= 1); channels[0] of each level is kept for
/// inspection.
struct Pyramid {
  Norm norm = Norm::L1;
  int input_size = 0;
  std::vector<PyramidLevel> levels;
  GraphSignal approximation;  ///< final approximation; the input itself when there is no level

  std::size_t detail_count() const {
    std::size_t total = 0;
    for (const auto& lv : levels)
      for (std::size_t l = 1; l < lv.channels.size(); ++l) total += static_cast<std::size_t>(lv.channels[l].size());
    return total;
  }

  /// The first `depth` levels, with that level's approximation as final output.
  Pyramid truncated(std::size_t depth) const {
    if (depth == 0 || depth > levels.size()) throw InputError("Pyramid::truncated: depth out of range");
    Pyramid out;
    out.norm = norm;
    out.input_size = input_size;
    out.levels.assign(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(depth));
    out.approximation = levels[depth - 1].channels[0];
    return out;
  }
};

/// Chooses the partition of a level's input graph. Returning std::nullopt
/// ends the cascade.
using Partitioner =
    std::function<std::optional<SubgraphPartition>(const WeightedGraph& graph, const GraphSignal& signal, std::size_t level)>;

/// Louvain at every level; level j uses seed `config.seed + j`. The
/// edge-aware variant reweights with the level's input signal.
inline Partitioner louvain_partitioner(PartitionConfig config) {
  return [config](const WeightedGraph& g, const GraphSignal& x, std::size_t level) -> std::optional<SubgraphPartition> {
    PartitionConfig c = config;
    c.seed = config.seed + level;
    return detect_partition(g, x, c);
  };
}

/// Externally supplied partitions, one per level.
inline Partitioner fixed_partitioner(std::vector<SubgraphPartition> partitions) {
  return [ps = std::move(partitions)](const WeightedGraph&, const GraphSignal&,
                                      std::size_t level) -> std::optional<SubgraphPartition> {
    if (level >= ps.size()) return std::nullopt;
    return ps[level];
  };
}

struct CascadeConfig {
  Partitioner partitioner;
  Norm norm = Norm::L1;
  std::size_t max_levels = 1;
};

/// Iterates the analysis block on the approximation channel. Stops after
/// `max_levels`, when the approximation graph has a single node, when the
/// partitioner declines, or when it returns all singletons.
inline Pyramid analyze_cascade(const WeightedGraph& g, const GraphSignal& x, const CascadeConfig& config) {
  if (x.size() != g.num_nodes()) throw InputError("analyze_cascade: signal length mismatch");
  if (!config.partitioner) throw InputError("analyze_cascade: no partitioner");
  Pyramid out;
  out.norm = config.norm;
  out.input_size = g.num_nodes();
  WeightedGraph graph = g;
  GraphSignal signal = x;
  for (std::size_t level = 0; level < config.max_levels; ++level) {
    if (graph.num_nodes() <= 1) break;
    auto c = config.partitioner(graph, signal, level);
    if (!c) break;
    if (c->size() != graph.num_nodes())
      throw InputError("analyze_cascade: partition for level " + std::to_string(level + 1) + " has the wrong length");
    if (c->num_subgraphs() == graph.num_nodes()) break;

    PyramidLevel lv;
    auto split = split_adjacency(graph, *c);
    lv.operators = LevelOperators(graph, *c, config.norm);
    auto analysis = analyze_level(signal, graph, lv.operators, split.inter);
    lv.partition = std::move(*c);
    lv.intra = std::move(split.intra);
    lv.inter = std::move(split.inter);
    lv.channels = std::move(analysis.channels);
    lv.coarse = std::move(analysis.coarse);
    graph = lv.coarse[0];
    signal = lv.channels[0];
    out.levels.push_back(std::move(lv));
  }
  out.approximation = std::move(signal);
  return out;
}

/// Inverse of analyze_cascade: level by level, from the deepest up.
inline GraphSignal synthesize_cascade(const Pyramid& pyramid) {
  GraphSignal x = pyramid.approximation;
  for (auto it = pyramid.levels.rbegin(); it != pyramid.levels.rend(); ++it) {
    if (it->channels.empty() || static_cast<std::size_t>(it->operators.num_channels()) != it->channels.size())
      throw InputError("synthesize_cascade: malformed pyramid level");
    if (x.size() != it->channels[0].size())
      throw InputError("synthesize_cascade: approximation does not match the level below");
    std::vector<Eigen::VectorXd> channels = it->channels;
    channels[0] = x;
    x = it->operators.synthesize(channels);
  }
  if (x.size() != pyramid.input_size) throw InputError("synthesize_cascade: output size mismatch");
  return x;
}

}  // namespace cosub
