#pragma once

// Standard test graphs. Random generators are deterministic for a given seed
// and standard library implementation.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cosub/graph.hpp"

namespace cosub {

/// Path 0 - 1 - ... - (n-1) with unit weights.
inline WeightedGraph line_graph(int n) {
  if (n < 1) throw InputError("line_graph: need at least one node");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return WeightedGraph(n, std::move(edges));
}

/// 4-neighbour grid, node index r * cols + c, unit weights.
inline WeightedGraph grid_graph(int rows, int cols) {
  if (rows < 1 || cols < 1) throw InputError("grid_graph: rows and cols must be positive");
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      if (c + 1 < cols) edges.push_back({i, i + 1, 1.0});
      if (r + 1 < rows) edges.push_back({i, i + cols, 1.0});
    }
  }
  return WeightedGraph(rows * cols, std::move(edges));
}

namespace detail {

// Batagelj-Brandes geometric skipping over the pairs (w < v) of [0, n).
template <typename Emit>
void sample_pairs(int n, double p, std::mt19937_64& rng, Emit&& emit) {
  if (p <= 0.0 || n < 2) return;
  if (p >= 1.0) {
    for (int v = 1; v < n; ++v)
      for (int w = 0; w < v; ++w) emit(w, v);
    return;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1, w = -1;
  while (v < n) {
    const double r = unif(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < n) {
      w -= v;
      ++v;
    }
    if (v < n) emit(static_cast<int>(w), static_cast<int>(v));
  }
}

}  // namespace detail

/// Stochastic block model with unit weights. Blocks occupy consecutive node
/// ranges in the order given. Expected cost O(N + M + sum of squared block sizes).
inline WeightedGraph sbm_graph(const std::vector<int>& block_sizes, double p_in, double p_out,
                               std::uint64_t seed) {
  if (block_sizes.empty()) throw InputError("sbm_graph: no blocks");
  for (int b : block_sizes)
    if (b < 1) throw InputError("sbm_graph: block sizes must be positive");
  if (!(p_out >= 0.0 && p_out <= p_in && p_in <= 1.0))
    throw InputError("sbm_graph: need 0 <= p_out <= p_in <= 1");

  std::vector<int> block_of;
  std::vector<int> start;
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    start.push_back(static_cast<int>(block_of.size()));
    block_of.insert(block_of.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<int>(b));
  }
  const int n = static_cast<int>(block_of.size());

  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  detail::sample_pairs(n, p_out, rng, [&](int w, int v) {
    if (block_of[static_cast<std::size_t>(w)] != block_of[static_cast<std::size_t>(v)]) edges.push_back({w, v, 1.0});
  });
  for (std::size_t b = 0; b < block_sizes.size(); ++b) {
    const int offset = start[b];
    detail::sample_pairs(block_sizes[b], p_in, rng,
                         [&](int w, int v) { edges.push_back({offset + w, offset + v, 1.0}); });
  }
  return WeightedGraph(n, std::move(edges));
}

inline WeightedGraph erdos_renyi_graph(int n, double p, std::uint64_t seed) {
  if (n < 1) throw InputError("erdos_renyi_graph: need at least one node");
  return sbm_graph({n}, p, p, seed);
}

/// Block index of each node for the layout used by `sbm_graph`.
inline std::vector<int> sbm_block_labels(const std::vector<int>& block_sizes) {
  std::vector<int> labels;
  for (std::size_t b = 0; b < block_sizes.size(); ++b)
    labels.insert(labels.end(), static_cast<std::size_t>(block_sizes[b]), static_cast<int>(b));
  return labels;
}

}  // namespace cosub
