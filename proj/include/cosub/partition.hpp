#pragma once

// Partition detection in connected subgraphs: modularity, greedy Louvain in
// its small-community (one local-moving pass) and large-community (iterated,
// size-capped) forms, signal-driven edge reweighting and the Haar partition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "cosub/graph.hpp"

namespace cosub {

enum class LouvainVariant {
  SmallCommunities,  ///< SC: a single local-moving phase
  LargeCommunities,  ///< LC: local moving + aggregation until no gain or size > tau
};

struct PartitionConfig {
  LouvainVariant variant = LouvainVariant::SmallCommunities;
  int tau = 1000;  ///< LC only: largest admissible community, in original nodes
  std::uint64_t seed = 0;
  bool edge_aware = false;  ///< detect on the signal-reweighted adjacency
};

/// Optional trace of a Louvain run.
struct LouvainStats {
  std::vector<double> move_gains;  ///< modularity increase of every accepted move
  int rounds = 0;                  ///< accepted local-moving rounds
  bool stopped_by_size = false;    ///< LC halted because a round exceeded tau
};

/// Q(c) = (1/2m) sum_ij (A_ij - d_i d_j / 2m) delta(c_i, c_j).
inline double modularity(const WeightedGraph& g, const SubgraphPartition& c) {
  if (c.size() != g.num_nodes()) throw InputError("modularity: partition length mismatch");
  const double two_m = 2.0 * g.total_weight();
  if (!(two_m > 0.0)) throw InputError("modularity: graph has zero total weight");
  std::vector<double> inside(static_cast<std::size_t>(c.num_subgraphs()), 0.0);
  std::vector<double> total(static_cast<std::size_t>(c.num_subgraphs()), 0.0);
  for (const auto& e : g.edges())
    if (c.label(e.u) == c.label(e.v)) inside[static_cast<std::size_t>(c.label(e.u))] += 2.0 * e.weight;
  for (int i = 0; i < g.num_nodes(); ++i) total[static_cast<std::size_t>(c.label(i))] += g.degree(i);
  double q = 0.0;
  for (std::size_t k = 0; k < inside.size(); ++k) q += inside[k] - total[k] * total[k] / two_m;
  return q / two_m;
}

/// Same support as g, weights exp(-(x_i - x_j)^2 / (2 sigma^2)) where sigma is
/// the population standard deviation of |x_i - x_j| over edges. When sigma
/// vanishes every weight is 1. Weights that underflow are clamped to the
/// smallest normal double so the edge set is preserved.
inline WeightedGraph edge_aware_adjacency(const WeightedGraph& g, const GraphSignal& x) {
  if (x.size() != g.num_nodes()) throw InputError("edge_aware_adjacency: signal length mismatch");
  const auto edges = g.edges();
  if (edges.empty()) return WeightedGraph(g.num_nodes());
  std::vector<double> diffs;
  diffs.reserve(edges.size());
  for (const auto& e : edges) diffs.push_back(std::abs(x[e.u] - x[e.v]));
  const double count = static_cast<double>(diffs.size());
  const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / count;
  double var = 0.0;
  for (double d : diffs) var += (d - mean) * (d - mean);
  const double sigma = std::sqrt(var / count);
  const double largest = *std::max_element(diffs.begin(), diffs.end());

  std::vector<Edge> out;
  out.reserve(edges.size());
  const bool degenerate = !(sigma > 1e-12 * largest) || sigma == 0.0;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    double w = 1.0;
    if (!degenerate) {
      w = std::exp(-diffs[i] * diffs[i] / (2.0 * sigma * sigma));
      w = std::max(w, std::numeric_limits<double>::min());
    }
    out.push_back({edges[i].u, edges[i].v, w});
  }
  return WeightedGraph(g.num_nodes(), std::move(out));
}

/// (0,0,1,1,2,2,...) on a path of even length n.
inline SubgraphPartition haar_partition(int n) {
  if (n < 2 || n % 2 != 0) throw InputError("haar_partition: n must be a positive even number");
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[static_cast<std::size_t>(i)] = i / 2;
  return SubgraphPartition(labels);
}

namespace detail {

// Louvain working graph. Self-loop weight counts ordered pairs inside a
// supernode, so degree = loop + sum of incident weights.
struct LouvainGraph {
  int n = 0;
  std::vector<std::size_t> offsets;
  std::vector<Neighbor> adjacency;
  std::vector<double> loops;
  std::vector<double> degree;

  std::span<const Neighbor> neighbors(int u) const {
    return {adjacency.data() + offsets[static_cast<std::size_t>(u)],
            offsets[static_cast<std::size_t>(u) + 1] - offsets[static_cast<std::size_t>(u)]};
  }
};

inline LouvainGraph louvain_graph(const WeightedGraph& g) {
  LouvainGraph w;
  w.n = g.num_nodes();
  w.offsets.assign(static_cast<std::size_t>(w.n) + 1, 0);
  for (int u = 0; u < w.n; ++u) w.offsets[static_cast<std::size_t>(u) + 1] = w.offsets[static_cast<std::size_t>(u)] + g.neighbors(u).size();
  w.adjacency.reserve(w.offsets.back());
  for (int u = 0; u < w.n; ++u)
    for (const auto& nb : g.neighbors(u)) w.adjacency.push_back(nb);
  w.loops.assign(static_cast<std::size_t>(w.n), 0.0);
  w.degree.resize(static_cast<std::size_t>(w.n));
  for (int u = 0; u < w.n; ++u) w.degree[static_cast<std::size_t>(u)] = g.degree(u);
  return w;
}

struct LocalMovingResult {
  std::vector<int> community;  // compacted in first-appearance order
  int count = 0;
  bool moved = false;
};

inline LocalMovingResult local_moving(const LouvainGraph& g, double two_m, std::mt19937_64& rng,
                                      LouvainStats* stats) {
  const auto n = static_cast<std::size_t>(g.n);
  std::vector<int> comm(n);
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot(g.degree);
  std::vector<double> link(n, 0.0);
  std::vector<char> touched_flag(n, 0);
  std::vector<int> touched;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  bool any_move = false;

  for (;;) {
    std::shuffle(order.begin(), order.end(), rng);
    bool moved = false;
    for (int i : order) {
      const double ki = g.degree[static_cast<std::size_t>(i)];
      const auto nbs = g.neighbors(i);
      if (nbs.empty()) continue;
      const int own = comm[static_cast<std::size_t>(i)];
      touched.clear();
      for (const auto& nb : nbs) {
        const int c = comm[static_cast<std::size_t>(nb.node)];
        if (!touched_flag[static_cast<std::size_t>(c)]) {
          touched_flag[static_cast<std::size_t>(c)] = 1;
          touched.push_back(c);
        }
        link[static_cast<std::size_t>(c)] += nb.weight;
      }
      tot[static_cast<std::size_t>(own)] -= ki;
      const double own_gain = link[static_cast<std::size_t>(own)] - ki * tot[static_cast<std::size_t>(own)] / two_m;
      const double eps = 1e-10 * ki;
      int best = own;
      double best_gain = own_gain;
      std::sort(touched.begin(), touched.end());
      for (int c : touched) {
        if (c == own) continue;
        const double gain = link[static_cast<std::size_t>(c)] - ki * tot[static_cast<std::size_t>(c)] / two_m;
        if (gain > best_gain + eps) {
          best = c;
          best_gain = gain;
        }
      }
      tot[static_cast<std::size_t>(best)] += ki;
      if (best != own) {
        comm[static_cast<std::size_t>(i)] = best;
        moved = true;
        if (stats) stats->move_gains.push_back(2.0 * (best_gain - own_gain) / two_m);
      }
      for (int c : touched) {
        link[static_cast<std::size_t>(c)] = 0.0;
        touched_flag[static_cast<std::size_t>(c)] = 0;
      }
    }
    if (!moved) break;
    any_move = true;
  }

  LocalMovingResult out;
  out.moved = any_move;
  std::vector<int> remap(n, -1);
  out.community.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int& r = remap[static_cast<std::size_t>(comm[i])];
    if (r < 0) r = out.count++;
    out.community[i] = r;
  }
  return out;
}

inline LouvainGraph aggregate(const LouvainGraph& g, const std::vector<int>& community, int count) {
  struct Triplet {
    int a, b;
    double w;
  };
  LouvainGraph out;
  out.n = count;
  out.loops.assign(static_cast<std::size_t>(count), 0.0);
  out.degree.assign(static_cast<std::size_t>(count), 0.0);
  std::vector<Triplet> trip;
  trip.reserve(g.adjacency.size());
  for (int u = 0; u < g.n; ++u) {
    const int a = community[static_cast<std::size_t>(u)];
    out.loops[static_cast<std::size_t>(a)] += g.loops[static_cast<std::size_t>(u)];
    out.degree[static_cast<std::size_t>(a)] += g.degree[static_cast<std::size_t>(u)];
    for (const auto& nb : g.neighbors(u)) {
      const int b = community[static_cast<std::size_t>(nb.node)];
      if (a == b)
        out.loops[static_cast<std::size_t>(a)] += nb.weight;
      else
        trip.push_back({a, b, nb.weight});
    }
  }
  std::sort(trip.begin(), trip.end(), [](const Triplet& x, const Triplet& y) {
    return x.a != y.a ? x.a < y.a : x.b < y.b;
  });
  out.offsets.assign(static_cast<std::size_t>(count) + 1, 0);
  for (std::size_t t = 0; t < trip.size(); ++t) {
    if (t > 0 && trip[t].a == trip[t - 1].a && trip[t].b == trip[t - 1].b) {
      out.adjacency.back().weight += trip[t].w;
    } else {
      out.adjacency.push_back({trip[t].b, trip[t].w});
      ++out.offsets[static_cast<std::size_t>(trip[t].a) + 1];
    }
  }
  std::partial_sum(out.offsets.begin(), out.offsets.end(), out.offsets.begin());
  return out;
}

// Splits every community into its connected components on g.
inline SubgraphPartition split_disconnected(const WeightedGraph& g, const std::vector<int>& community) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  std::vector<int> label(n, -1);
  std::vector<int> stack;
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(static_cast<int>(s));
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(u)) {
        const auto v = static_cast<std::size_t>(nb.node);
        if (label[v] < 0 && community[v] == community[s]) {
          label[v] = next;
          stack.push_back(nb.node);
        }
      }
    }
    ++next;
  }
  return SubgraphPartition(label);
}

}  // namespace detail

/// Greedy modularity partition in connected communities.
///
/// Nodes are swept in a fresh random order each pass (seeded by
/// `config.seed`); a node moves only for a strict modularity gain, and equal
/// gains go to the smallest community label. LC alternates local moving and
/// aggregation; a round whose largest community would exceed `tau` original
/// nodes is discarded and the algorithm stops. Returned communities are split
/// into connected components, which never lowers modularity.
inline SubgraphPartition louvain(const WeightedGraph& g, const PartitionConfig& config,
                                 LouvainStats* stats = nullptr) {
  if (config.variant == LouvainVariant::LargeCommunities && config.tau < 2)
    throw InputError("louvain: tau must be at least 2");
  const int n = g.num_nodes();
  if (n == 0) return {};
  if (!(g.total_weight() > 0.0)) return SubgraphPartition::singletons(n);

  const double two_m = 2.0 * g.total_weight();
  std::mt19937_64 rng(config.seed);
  detail::LouvainGraph work = detail::louvain_graph(g);
  std::vector<int> membership(static_cast<std::size_t>(n));
  std::iota(membership.begin(), membership.end(), 0);

  for (;;) {
    std::vector<double> gains_before;
    if (stats) gains_before = stats->move_gains;
    auto round = detail::local_moving(work, two_m, rng, stats);
    if (!round.moved) break;

    std::vector<int> next(membership.size());
    for (std::size_t i = 0; i < next.size(); ++i)
      next[i] = round.community[static_cast<std::size_t>(membership[i])];

    if (config.variant == LouvainVariant::LargeCommunities) {
      std::vector<int> sizes(static_cast<std::size_t>(round.count), 0);
      for (int c : next) ++sizes[static_cast<std::size_t>(c)];
      if (*std::max_element(sizes.begin(), sizes.end()) > config.tau) {
        if (stats) {
          stats->move_gains = std::move(gains_before);
          stats->stopped_by_size = true;
        }
        break;
      }
    }
    membership = std::move(next);
    if (stats) ++stats->rounds;
    if (config.variant == LouvainVariant::SmallCommunities) break;
    work = detail::aggregate(work, round.community, round.count);
  }
  return detail::split_disconnected(g, membership);
}

/// Partition detection as used by the analysis cascade: Louvain on A, or on
/// the edge-aware reweighting of A by `signal` when `config.edge_aware`.
inline SubgraphPartition detect_partition(const WeightedGraph& g, const GraphSignal& signal,
                                          const PartitionConfig& config, LouvainStats* stats = nullptr) {
  if (config.edge_aware) return louvain(edge_aware_adjacency(g, signal), config, stats);
  return louvain(g, config, stats);
}

}  // namespace cosub
