#pragma once

// Analysis atoms in original-graph coordinates.

#include <algorithm>
#include <numeric>
#include <vector>

#include "cosub/filterbank.hpp"

namespace cosub {

/// One column of Theta_1^(1) ... Theta_1^(j-1) Theta_l^(j). Values are stored
/// on `support` only; every other node holds an exact zero.
struct Atom {
  int level = 0;     ///< 0-based pyramid level j-1
  int channel = 0;   ///< 0 = approximation (Phi), >= 1 = detail (Psi)
  int index = 0;     ///< position within the channel
  int subgraph = 0;  ///< subgraph label at `level`
  std::vector<int> support;  ///< ascending original node indices
  std::vector<double> values;

  GraphSignal dense(int n) const {
    GraphSignal out = GraphSignal::Zero(n);
    for (std::size_t i = 0; i < support.size(); ++i) out[support[i]] = values[i];
    return out;
  }
};

namespace detail {

/// Applies Theta_1 of `ops` to a vector given on its subgraphs (supernodes).
inline void upsample(const LevelOperators& ops, std::vector<int>& support, std::vector<double>& values) {
  std::vector<std::pair<int, double>> out;
  for (std::size_t s = 0; s < support.size(); ++s) {
    const auto& b = ops.block(support[s]);
    for (std::size_t i = 0; i < b.nodes.size(); ++i)
      out.emplace_back(b.nodes[i], b.basis.analysis(static_cast<Eigen::Index>(i), 0) * values[s]);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  support.resize(out.size());
  values.resize(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    support[i] = out[i].first;
    values[i] = out[i].second;
  }
}

inline Atom make_atom(const Pyramid& pyramid, std::size_t level, int channel, int index) {
  const auto& ops = pyramid.levels[level].operators;
  const int k = ops.index_list(channel)[static_cast<std::size_t>(index)];
  const auto& b = ops.block(k);
  Atom a{static_cast<int>(level), channel, index, k, b.nodes, {}};
  a.values.resize(b.nodes.size());
  for (std::size_t i = 0; i < b.nodes.size(); ++i)
    a.values[i] = b.basis.analysis(static_cast<Eigen::Index>(i), channel);
  for (std::size_t below = level; below-- > 0;) upsample(pyramid.levels[below].operators, a.support, a.values);
  return a;
}

}  // namespace detail

/// Every detail atom (by level, channel, index) followed by the final
/// approximation atoms; N atoms in total. A pyramid without levels yields the
/// N Dirac atoms, tagged as approximation atoms of level -1.
inline std::vector<Atom> compute_atoms(const Pyramid& pyramid) {
  std::vector<Atom> atoms;
  if (pyramid.levels.empty()) {
    for (int i = 0; i < pyramid.input_size; ++i) atoms.push_back(Atom{-1, 0, i, i, {i}, {1.0}});
    return atoms;
  }
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j) {
    const auto& ops = pyramid.levels[j].operators;
    for (int l = 1; l < ops.num_channels(); ++l)
      for (std::size_t t = 0; t < ops.index_list(l).size(); ++t)
        atoms.push_back(detail::make_atom(pyramid, j, l, static_cast<int>(t)));
  }
  const std::size_t last = pyramid.levels.size() - 1;
  for (std::size_t t = 0; t < pyramid.levels[last].operators.index_list(0).size(); ++t)
    atoms.push_back(detail::make_atom(pyramid, last, 0, static_cast<int>(t)));
  return atoms;
}

}  // namespace cosub
