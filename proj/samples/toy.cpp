// Five-node toy: a triangle and a pair joined by one edge, two levels, L1 modes.
// Prints the operators of both levels and the atoms.

#include <iostream>

#include "cosub/cosub.hpp"

int main() {
  using namespace cosub;
  const WeightedGraph g(5, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {3, 4, 1.0}});
  const CascadeConfig config{fixed_partitioner({SubgraphPartition(std::vector<int>{0, 0, 0, 1, 1}),
                                                SubgraphPartition(std::vector<int>{0, 0})}),
                             Norm::L1, 2};
  GraphSignal x(5);
  x << 1.0, -1.0, 0.0, 0.0, 0.0;
  const Pyramid p = analyze_cascade(g, x, config);

  const Eigen::IOFormat row(Eigen::StreamPrecision, Eigen::DontAlignCols, ", ", "; ", "", "", "[", "]");
  for (std::size_t j = 0; j < p.levels.size(); ++j) {
    const auto& ops = p.levels[j].operators;
    std::cout << "level " << j + 1 << ": " << ops.num_channels() << " channels\n";
    for (int l = 0; l < ops.num_channels(); ++l) {
      std::cout << "  Theta_" << l + 1 << "^T = " << ops.theta(l).transpose().format(row) << "\n";
      std::cout << "  Pi_" << l + 1 << "^T    = " << ops.pi(l).transpose().format(row) << "\n";
      std::cout << "  x_" << l + 1 << "       = " << p.levels[j].channels[static_cast<std::size_t>(l)].transpose().format(row)
                << "\n";
    }
  }
  std::cout << "atoms:\n";
  for (const auto& a : compute_atoms(p))
    std::cout << "  level " << a.level + 1 << " channel " << a.channel + 1 << ": "
              << a.dense(5).transpose().format(row) << "\n";
  std::cout << "reconstruction error: " << (synthesize_cascade(p) - x).cwiseAbs().maxCoeff() << "\n";
}
