#pragma once

#include <cstdint>

#include "renewfluct/rng.hpp"

namespace renewfluct {

/// Growth rate alpha of the lifetimes; always strictly greater than one.
class GrowthRate {
 public:
  explicit GrowthRate(double alpha);
  double value() const noexcept { return alpha_; }

 private:
  double alpha_;
};

enum class LifetimeKind {
  /// Holding times of the digital-search-tree birth chain: Y_1 = 1 and
  /// Y_k ~ Geometric(2^{-k+1}); alpha = 2 with Exp(2) limit.
  GeometricDst,
  /// Y_k = alpha^k * W_k with W_k i.i.d. exponential of a configurable mean,
  /// so alpha^{-k} Y_k has the limit law exactly for every k.
  ScaledBase,
};

/// A family of independent lifetimes (Y_k), k >= 1, growing like alpha^k in
/// distribution. The limit law of alpha^{-k} Y_k must be atom-free; both
/// shipped kinds satisfy this, arbitrary user families are not checked.
class LifetimeFamily {
 public:
  static LifetimeFamily geometric_dst() noexcept;
  static LifetimeFamily scaled_exponential(GrowthRate rate, double base_mean);

  LifetimeKind kind() const noexcept { return kind_; }
  GrowthRate rate() const noexcept { return rate_; }
  double alpha() const noexcept { return rate_.value(); }
  /// Mean of the exponential base law W_k (ScaledBase only; 1/2 for GeometricDst).
  double base_mean() const noexcept { return base_mean_; }

  /// E Y_inf, the mean of the limit law of alpha^{-k} Y_k.
  double limit_mean() const noexcept { return base_mean_; }
  /// One draw of Y_inf (Exp(2) for GeometricDst).
  double sample_limit(Rng& rng) const noexcept;

 private:
  LifetimeFamily(LifetimeKind kind, GrowthRate rate, double base_mean) noexcept
      : kind_(kind), rate_(rate), base_mean_(base_mean) {}

  LifetimeKind kind_;
  GrowthRate rate_;
  double base_mean_;
};

/// P(Y_k = j) for the geometric holding time in state k-1 of the birth chain.
double geometric_pmf(int k, std::int64_t j);

/// E Y_k. GeometricDst: 2^{k-1}, rejected above k = 60.
double lifetime_mean(const LifetimeFamily& family, int k);

/// One draw of Y_k. Geometric draws use a single uniform by CDF inversion.
double sample_lifetime(const LifetimeFamily& family, int k, Rng& rng);

/// Coupling scale alpha_k = 1 / (-log(1 - 2^{-k+1})), with alpha_1 = 0.
double coupling_alpha(int k);

struct CoupledPair {
  std::int64_t discrete;  ///< floor(alpha_k z) + 1, distributed as Y_k
  double continuous;      ///< 2^{k-1} z for the same Exp(1) draw z
  int index;
};

CoupledPair sample_coupled_pair(int k, Rng& rng);

}  // namespace renewfluct
