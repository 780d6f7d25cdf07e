#pragma once

// Non-linear approximation, hard-threshold denoising and quality metrics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "cosub/filterbank.hpp"
#include "cosub/fourier.hpp"

namespace cosub {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// 10 log10(peak^2 / MSE) with peak = max |reference|; +inf when equal.
inline double psnr(const GraphSignal& reference, const GraphSignal& estimate) {
  if (reference.size() != estimate.size()) throw InputError("psnr: length mismatch");
  if (reference.size() == 0) throw InputError("psnr: empty signal");
  const double mse = (reference - estimate).squaredNorm() / static_cast<double>(reference.size());
  if (mse == 0.0) return kInfinity;
  const double peak = reference.cwiseAbs().maxCoeff();
  return 10.0 * std::log10(peak * peak / mse);
}

/// 10 log10(|x|^2 / |x - x_hat|^2); +inf when equal.
inline double snr(const GraphSignal& reference, const GraphSignal& estimate) {
  if (reference.size() != estimate.size()) throw InputError("snr: length mismatch");
  const double err = (reference - estimate).squaredNorm();
  if (err == 0.0) return kInfinity;
  const double energy = reference.squaredNorm();
  if (energy == 0.0) throw InputError("snr: reference signal is zero");
  return 10.0 * std::log10(energy / err);
}

/// N / (kept_lp + kept_hp).
inline double compression_ratio(std::size_t total, std::size_t kept_lp, std::size_t kept_hp) {
  const std::size_t kept = kept_lp + kept_hp;
  if (kept == 0) throw InputError("compression_ratio: nothing kept");
  if (kept > total) throw InputError("compression_ratio: more coefficients kept than available");
  return static_cast<double>(total) / static_cast<double>(kept);
}

/// Keeps the approximation and the `keep_hp` largest-magnitude detail
/// coefficients over all levels; ties go to the smallest (level, channel, index).
inline Pyramid nla_compress(const Pyramid& pyramid, std::size_t keep_hp) {
  struct Slot {
    std::size_t level;
    std::size_t channel;
    Eigen::Index index;
    double magnitude;
  };
  std::vector<Slot> slots;
  slots.reserve(pyramid.detail_count());
  for (std::size_t j = 0; j < pyramid.levels.size(); ++j)
    for (std::size_t l = 1; l < pyramid.levels[j].channels.size(); ++l)
      for (Eigen::Index i = 0; i < pyramid.levels[j].channels[l].size(); ++i)
        slots.push_back({j, l, i, std::abs(pyramid.levels[j].channels[l][i])});
  if (keep_hp > slots.size()) throw InputError("nla_compress: keep_hp exceeds the number of detail coefficients");

  // Slots are already in (level, channel, index) order.
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.magnitude > b.magnitude; });
  Pyramid out = pyramid;
  for (std::size_t s = keep_hp; s < slots.size(); ++s)
    out.levels[slots[s].level].channels[slots[s].channel][slots[s].index] = 0.0;
  return out;
}

/// How many detail coefficients a non-linear approximation may keep.
struct HighPassBudget {
  enum class Kind { Count, Fraction, Ratio };
  Kind kind = Kind::Count;
  double value = 0.0;

  static HighPassBudget count(std::size_t n) { return {Kind::Count, static_cast<double>(n)}; }
  /// A fraction of the detail coefficients available at each depth.
  static HighPassBudget fraction(double f) { return {Kind::Fraction, f}; }
  /// Total kept (approximation + details) = floor(N / ratio).
  static HighPassBudget ratio(double r) { return {Kind::Ratio, r}; }

  /// Kept detail count for a depth, or nullopt when the approximation alone
  /// exceeds a ratio budget. Counts are clamped to what is available.
  std::optional<std::size_t> resolve(std::size_t total, std::size_t lp, std::size_t available) const {
    switch (kind) {
      case Kind::Count:
        return std::min(available, static_cast<std::size_t>(value));
      case Kind::Fraction:
        return std::min(available, static_cast<std::size_t>(std::llround(value * static_cast<double>(available))));
      case Kind::Ratio: {
        const auto budget = static_cast<std::size_t>(std::floor(static_cast<double>(total) / value));
        if (budget < lp) return std::nullopt;
        return std::min(available, budget - lp);
      }
    }
    return std::nullopt;
  }
};

struct NlaResult {
  int level = 0;  ///< cascade depth used (0 when no level could be built)
  std::size_t kept_hp = 0;
  std::size_t lp = 0;
  double ratio = 1.0;
  double psnr = kInfinity;
  GraphSignal reconstruction;
};

/// NLA at every depth of one cascade; keeps the depth with the best PSNR
/// (the shallowest on ties). A depth whose budget covers every detail
/// coefficient is lossless and returns the input unchanged.
inline NlaResult best_level_nla(const WeightedGraph& g, const GraphSignal& x, const CascadeConfig& config,
                                HighPassBudget budget) {
  if (budget.kind != HighPassBudget::Kind::Count && !(budget.value > 0.0))
    throw InputError("best_level_nla: budget must be positive");
  if (budget.kind == HighPassBudget::Kind::Fraction && budget.value > 1.0)
    throw InputError("best_level_nla: fraction exceeds 1");
  const Pyramid full = analyze_cascade(g, x, config);
  const auto total = static_cast<std::size_t>(x.size());
  NlaResult best;
  best.lp = total;
  best.reconstruction = x;
  bool found = false;
  for (std::size_t depth = 1; depth <= full.levels.size(); ++depth) {
    const Pyramid p = full.truncated(depth);
    const auto lp = static_cast<std::size_t>(p.approximation.size());
    const auto keep = budget.resolve(total, lp, p.detail_count());
    if (!keep) continue;
    // Nothing discarded: the approximation is the signal itself.
    GraphSignal rec = *keep == p.detail_count() ? x : synthesize_cascade(nla_compress(p, *keep));
    const double q = psnr(x, rec);
    if (!found || q > best.psnr) {
      found = true;
      best = {static_cast<int>(depth), *keep, lp, compression_ratio(total, lp, *keep), q, std::move(rec)};
    }
  }
  if (!found && !full.levels.empty()) throw InputError("best_level_nla: budget smaller than every approximation");
  return best;
}

inline NlaResult best_level_nla(const WeightedGraph& g, const GraphSignal& x, const CascadeConfig& config,
                                std::size_t keep_hp) {
  return best_level_nla(g, x, config, HighPassBudget::count(keep_hp));
}

struct DenoiseResult {
  GraphSignal signal;
  bool norm_overridden = false;  ///< the config asked for L1; L2 was used
};

/// Hard thresholding of every detail coefficient at T = 3 sigma (kept iff
/// |c| > T), with L2-normalized modes.
inline DenoiseResult denoise(const WeightedGraph& g, const GraphSignal& noisy, double sigma, CascadeConfig config) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("denoise: sigma must be finite and non-negative");
  DenoiseResult out;
  out.norm_overridden = config.norm != Norm::L2;
  config.norm = Norm::L2;
  Pyramid p = analyze_cascade(g, noisy, config);
  const double t = 3.0 * sigma;
  for (auto& lv : p.levels)
    for (std::size_t l = 1; l < lv.channels.size(); ++l)
      for (Eigen::Index i = 0; i < lv.channels[l].size(); ++i)
        if (!(std::abs(lv.channels[l][i]) > t)) lv.channels[l][i] = 0.0;
  out.signal = synthesize_cascade(p);
  return out;
}

/// Sum of the first k global Fourier modes, scaled to unit max-abs.
inline GraphSignal smooth_test_signal(const WeightedGraph& g, int k) {
  if (k < 1 || k > g.num_nodes()) throw InputError("smooth_test_signal: k must lie in [1, N]");
  const FourierBasis basis = fourier_basis(g);
  GraphSignal x = basis.modes.leftCols(k).rowwise().sum();
  const double peak = x.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw NumericError("smooth_test_signal: modes cancel out");
  return x / peak;
}

}  // namespace cosub
