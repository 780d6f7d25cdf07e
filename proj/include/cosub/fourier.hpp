#pragma once

#include "cosub/graph.hpp"
#include "cosub/spectral.hpp"

namespace cosub {

struct FourierBasis {
  Eigen::VectorXd eigenvalues;  ///< ascending
  Eigen::MatrixXd modes;        ///< orthonormal, canonical signs and repeated eigenspaces
};

/// Global Laplacian eigenbasis of a connected graph (dense, O(N^3)).
inline FourierBasis fourier_basis(const WeightedGraph& g) {
  if (g.num_nodes() == 0) throw InputError("fourier_basis: empty graph");
  if (!is_connected(g)) throw InputError("fourier_basis: graph is not connected");
  LocalEigenBasis b = local_eigenbasis(laplacian(g), Norm::L2);
  return {std::move(b.eigenvalues), std::move(b.analysis)};
}

/// Graph Fourier transform Q^T x.
inline Eigen::VectorXd global_fourier(const WeightedGraph& g, const GraphSignal& x) {
  if (x.size() != g.num_nodes()) throw InputError("global_fourier: signal length mismatch");
  return fourier_basis(g).modes.transpose() * x;
}

}  // namespace cosub
