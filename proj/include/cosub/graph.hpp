#pragma once

// Undirected weighted graphs, graph signals and partitions in connected
// subgraphs, plus the structural operations the filterbank is built from:
// Laplacian, intra/inter adjacency split, local extraction, connected
// components and supernode coarsening.
//
// Node indices are 0-based everywhere in the library. Subgraph labels are
// 0-based as well; files written by the CLI use 1-based labels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cosub/error.hpp"

namespace cosub {

/// Real values attached to the nodes of a graph, aligned with node indices.
using GraphSignal = Eigen::VectorXd;

struct Edge {
  int u = 0;
  int v = 0;
  double weight = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  int node = 0;
  double weight = 0.0;
};

/// Immutable undirected graph with strictly positive weights and no self-loops.
///
/// Each unordered pair is stored once in `edges()` with `u < v`, sorted
/// lexicographically. `neighbors(u)` exposes the symmetric CSR view, sorted by
/// neighbor index.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  explicit WeightedGraph(int num_nodes) : WeightedGraph(num_nodes, {}) {}

  /// Throws InputError on self-loops, non-positive or non-finite weights,
  /// out-of-range endpoints and duplicate unordered pairs.
  WeightedGraph(int num_nodes, std::vector<Edge> edges) : n_(num_nodes) {
    if (num_nodes < 0) throw InputError("graph: negative node count");
    for (auto& e : edges) {
      if (e.u < 0 || e.v < 0 || e.u >= n_ || e.v >= n_)
        throw InputError("graph: edge endpoint out of range (" + std::to_string(e.u) + ", " +
                         std::to_string(e.v) + ") for " + std::to_string(n_) + " nodes");
      if (e.u == e.v) throw InputError("graph: self-loop on node " + std::to_string(e.u));
      if (!(e.weight > 0.0) || !std::isfinite(e.weight))
        throw InputError("graph: edge weight must be positive and finite");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (std::size_t i = 1; i < edges.size(); ++i) {
      if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
        throw InputError("graph: duplicate edge (" + std::to_string(edges[i].u) + ", " +
                         std::to_string(edges[i].v) + ")");
    }
    edges_ = std::move(edges);

    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[static_cast<std::size_t>(e.u) + 1];
      ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    degrees_.assign(static_cast<std::size_t>(n_), 0.0);
    for (const auto& e : edges_) {
      adjacency_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.weight};
      adjacency_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.weight};
      degrees_[static_cast<std::size_t>(e.u)] += e.weight;
      degrees_[static_cast<std::size_t>(e.v)] += e.weight;
      total_weight_ += e.weight;
    }
    // Sorted edges fill each CSR row in ascending neighbor order.
  }

  int num_nodes() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }

  std::span<const Neighbor> neighbors(int u) const {
    const auto b = offsets_[static_cast<std::size_t>(u)];
    const auto e = offsets_[static_cast<std::size_t>(u) + 1];
    return {adjacency_.data() + b, e - b};
  }

  double degree(int u) const { return degrees_[static_cast<std::size_t>(u)]; }

  /// Weight of edge {u, v}, or 0 when absent.
  double weight(int u, int v) const {
    auto row = neighbors(u);
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const Neighbor& nb, int x) { return nb.node < x; });
    return (it != row.end() && it->node == v) ? it->weight : 0.0;
  }

  /// Sum of edge weights, each undirected edge counted once (m).
  double total_weight() const { return total_weight_; }

  Eigen::MatrixXd dense_adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& e : edges_) {
      a(e.u, e.v) = e.weight;
      a(e.v, e.u) = e.weight;
    }
    return a;
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> adjacency_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

/// Node-to-subgraph labelling, stored in canonical form.
///
/// Labels are compacted to 0..K-1 in order of each class's smallest member
/// index, so two labellings describing the same set partition compare equal.
/// Connectivity of each class is a property relative to a host graph; see
/// `validate_partition`.
class SubgraphPartition {
 public:
  SubgraphPartition() = default;

  /// Accepts arbitrary non-negative integer labels and canonicalizes them.
  explicit SubgraphPartition(std::span<const int> labels) {
    std::vector<int> remap;
    labels_.reserve(labels.size());
    for (int raw : labels) {
      if (raw < 0) throw InputError("partition: negative label");
      if (static_cast<std::size_t>(raw) >= remap.size()) remap.resize(static_cast<std::size_t>(raw) + 1, -1);
      int& slot = remap[static_cast<std::size_t>(raw)];
      if (slot < 0) slot = num_subgraphs_++;
      labels_.push_back(slot);
    }
    members_.assign(static_cast<std::size_t>(num_subgraphs_), {});
    for (std::size_t i = 0; i < labels_.size(); ++i)
      members_[static_cast<std::size_t>(labels_[i])].push_back(static_cast<int>(i));
  }

  explicit SubgraphPartition(const std::vector<int>& labels)
      : SubgraphPartition(std::span<const int>(labels)) {}

  static SubgraphPartition singletons(int n) {
    std::vector<int> l(static_cast<std::size_t>(n));
    std::iota(l.begin(), l.end(), 0);
    return SubgraphPartition(l);
  }

  static SubgraphPartition single_block(int n) {
    return SubgraphPartition(std::vector<int>(static_cast<std::size_t>(n), 0));
  }

  int size() const { return static_cast<int>(labels_.size()); }
  int num_subgraphs() const { return num_subgraphs_; }
  int label(int node) const { return labels_[static_cast<std::size_t>(node)]; }
  std::span<const int> labels() const { return labels_; }

  /// Members of subgraph k in ascending node order (this order fixes the
  /// local coordinates of every per-subgraph operator).
  std::span<const int> members(int k) const { return members_[static_cast<std::size_t>(k)]; }
  int subgraph_size(int k) const { return static_cast<int>(members_[static_cast<std::size_t>(k)].size()); }

  int max_subgraph_size() const {
    int best = 0;
    for (const auto& m : members_) best = std::max(best, static_cast<int>(m.size()));
    return best;
  }

  friend bool operator==(const SubgraphPartition& a, const SubgraphPartition& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  std::vector<std::vector<int>> members_;
  int num_subgraphs_ = 0;
};

// ---------------------------------------------------------------------------
// Structural operations
// ---------------------------------------------------------------------------

/// Combinatorial Laplacian D - A as a dense matrix.
inline Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    l(e.u, e.v) -= e.weight;
    l(e.v, e.u) -= e.weight;
    l(e.u, e.u) += e.weight;
    l(e.v, e.v) += e.weight;
  }
  return l;
}

/// Labels components by ascending smallest node index.
inline SubgraphPartition connected_components(const WeightedGraph& g) {
  const int n = g.num_nodes();
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u)) {
        if (comp[static_cast<std::size_t>(nb.node)] < 0) {
          comp[static_cast<std::size_t>(nb.node)] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return SubgraphPartition(comp);
}

inline bool is_connected(const WeightedGraph& g) {
  return g.num_nodes() <= 1 || connected_components(g).num_subgraphs() == 1;
}

/// Whether every class of `c` induces a connected subgraph of `g`.
inline bool has_connected_subgraphs(const WeightedGraph& g, const SubgraphPartition& c) {
  if (c.size() != g.num_nodes()) return false;
  std::vector<char> seen(static_cast<std::size_t>(g.num_nodes()), 0);
  std::vector<int> stack;
  for (int k = 0; k < c.num_subgraphs(); ++k) {
    auto mem = c.members(k);
    int reached = 1;
    seen[static_cast<std::size_t>(mem.front())] = 1;
    stack.push_back(mem.front());
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u)) {
        if (c.label(nb.node) == k && !seen[static_cast<std::size_t>(nb.node)]) {
          seen[static_cast<std::size_t>(nb.node)] = 1;
          ++reached;
          stack.push_back(nb.node);
        }
      }
    }
    if (reached != static_cast<int>(mem.size())) return false;
  }
  return true;
}

/// Throws InputError unless `c` is a partition of `g` in connected subgraphs.
inline void validate_partition(const WeightedGraph& g, const SubgraphPartition& c) {
  if (c.size() != g.num_nodes())
    throw InputError("partition has " + std::to_string(c.size()) + " labels for a graph of " +
                     std::to_string(g.num_nodes()) + " nodes");
  if (!has_connected_subgraphs(g, c))
    throw InputError("partition contains a subgraph that is not connected");
}

struct AdjacencySplit {
  WeightedGraph intra;  ///< edges with both endpoints in the same subgraph
  WeightedGraph inter;  ///< edges joining two different subgraphs
};

inline AdjacencySplit split_adjacency(const WeightedGraph& g, const SubgraphPartition& c) {
  if (c.size() != g.num_nodes()) throw InputError("split_adjacency: partition length mismatch");
  std::vector<Edge> intra, inter;
  for (const auto& e : g.edges()) (c.label(e.u) == c.label(e.v) ? intra : inter).push_back(e);
  return {WeightedGraph(g.num_nodes(), std::move(intra)), WeightedGraph(g.num_nodes(), std::move(inter))};
}

/// Induced subgraph on the members of subgraph k, nodes in ascending original order.
inline WeightedGraph extract_local_adjacency(const WeightedGraph& g, const SubgraphPartition& c, int k) {
  if (c.size() != g.num_nodes()) throw InputError("extract_local_adjacency: partition length mismatch");
  if (k < 0 || k >= c.num_subgraphs()) throw InputError("extract_local_adjacency: unknown label " + std::to_string(k));
  auto mem = c.members(k);
  std::vector<Edge> local;
  for (std::size_t i = 0; i < mem.size(); ++i) {
    for (const auto& nb : g.neighbors(mem[i])) {
      if (nb.node <= mem[i] || c.label(nb.node) != k) continue;
      auto j = std::lower_bound(mem.begin(), mem.end(), nb.node) - mem.begin();
      local.push_back({static_cast<int>(i), static_cast<int>(j), nb.weight});
    }
  }
  return WeightedGraph(static_cast<int>(mem.size()), std::move(local));
}

namespace detail {

inline WeightedGraph coarsen_edges(std::span<const Edge> edges, std::span<const int> supernode_of,
                                   int num_supernodes) {
  std::vector<Edge> acc;
  acc.reserve(edges.size());
  for (const auto& e : edges) {
    int a = supernode_of[static_cast<std::size_t>(e.u)];
    int b = supernode_of[static_cast<std::size_t>(e.v)];
    if (a < 0 || b < 0 || a == b) continue;
    if (a > b) std::swap(a, b);
    acc.push_back({a, b, e.weight});
  }
  std::sort(acc.begin(), acc.end(), [](const Edge& x, const Edge& y) {
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  });
  std::vector<Edge> merged;
  for (const auto& e : acc) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().weight += e.weight;
    else
      merged.push_back(e);
  }
  return WeightedGraph(num_supernodes, std::move(merged));
}

}  // namespace detail

/// Omega^T A Omega with the diagonal dropped: supernode s gathers every node
/// with `supernode_of[i] == s`; nodes mapped to -1 are excluded.
inline WeightedGraph coarsen(const WeightedGraph& g, std::span<const int> supernode_of, int num_supernodes) {
  if (static_cast<int>(supernode_of.size()) != g.num_nodes()) throw InputError("coarsen: map length mismatch");
  for (int s : supernode_of)
    if (s >= num_supernodes || s < -1) throw InputError("coarsen: supernode index out of range");
  return detail::coarsen_edges(g.edges(), supernode_of, num_supernodes);
}

/// Coarsening by a full partition (every subgraph becomes one supernode).
inline WeightedGraph coarsen(const WeightedGraph& g, const SubgraphPartition& c) {
  if (c.size() != g.num_nodes()) throw InputError("coarsen: partition length mismatch");
  return detail::coarsen_edges(g.edges(), c.labels(), c.num_subgraphs());
}

}  // namespace cosub
