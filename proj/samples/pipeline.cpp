// Community-structured graph, smooth signal: compression and denoising.

#include <cstdio>
#include <random>

#include "cosub/cosub.hpp"

int main() {
  using namespace cosub;
  const WeightedGraph g = sbm_graph({100, 100, 100, 100}, 0.1, 0.005, 7);
  const GraphSignal x = smooth_test_signal(g, 5);

  PartitionConfig sc;
  sc.seed = 1;
  const CascadeConfig cascade{louvain_partitioner(sc), Norm::L1, 4};
  const Pyramid p = analyze_cascade(g, x, cascade);
  std::printf("levels %zu, approximation %ld, detail coefficients %zu\n", p.levels.size(),
              static_cast<long>(p.approximation.size()), p.detail_count());
  std::printf("reconstruction error %.3g\n", (synthesize_cascade(p) - x).cwiseAbs().maxCoeff());

  for (double f : {0.01, 0.05, 0.2}) {
    const auto r = best_level_nla(g, x, cascade, HighPassBudget::fraction(f));
    std::printf("keep %4.0f%% of details: level %d, lp %zu, hp %zu, ratio %.2f, psnr %.2f dB\n", 100 * f, r.level,
                r.lp, r.kept_hp, r.ratio, r.psnr);
  }

  PartitionConfig lc;
  lc.variant = LouvainVariant::LargeCommunities;
  const CascadeConfig one_level{louvain_partitioner(lc), Norm::L2, 1};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.1);
  GraphSignal noisy = x;
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy[i] += noise(rng);
  const auto d = denoise(g, noisy, 0.1, one_level);
  std::printf("denoising: snr in %.2f dB, out %.2f dB\n", snr(x, noisy), snr(x, d.signal));
}
