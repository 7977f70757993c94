#include "renewfluct/lifetimes.hpp"

#include <cmath>
#include <string>

#include "renewfluct/error.hpp"

namespace renewfluct {
namespace {

// Geometric inversion needs log1p(-2^{-k+1}) to stay nonzero.
constexpr int kMaxSampledIndex = 1000;
// 2^{k-1} stays an exact integer-valued double well past this; the cap
// mirrors the 64-bit counters used by exact-mean consumers.
constexpr int kMaxExactMeanIndex = 60;
// floor(alpha_k z) must fit an int64 for any realistic Exp(1) draw z.
constexpr int kMaxCoupledIndex = 56;

void require_index(int k, int max_index) {
  if (k < 1 || k > max_index) {
    throw DomainError("lifetime index " + std::to_string(k) + " outside [1, " +
                      std::to_string(max_index) + "]");
  }
}

}  // namespace

GrowthRate::GrowthRate(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) {
    throw DomainError("growth rate must be a finite value > 1");
  }
}

LifetimeFamily LifetimeFamily::geometric_dst() noexcept {
  return LifetimeFamily(LifetimeKind::GeometricDst, GrowthRate(2.0), 0.5);
}

LifetimeFamily LifetimeFamily::scaled_exponential(GrowthRate rate, double base_mean) {
  if (!(base_mean > 0.0) || !std::isfinite(base_mean)) {
    throw DomainError("base mean must be finite and positive");
  }
  return LifetimeFamily(LifetimeKind::ScaledBase, rate, base_mean);
}

double LifetimeFamily::sample_limit(Rng& rng) const noexcept {
  return base_mean_ * rng.exponential();
}

double geometric_pmf(int k, std::int64_t j) {
  if (k < 1) throw DomainError("geometric_pmf: k must be >= 1");
  if (j < 1) throw DomainError("geometric_pmf: j must be >= 1");
  if (k == 1) return j == 1 ? 1.0 : 0.0;
  const double p = std::ldexp(1.0, -k + 1);
  return std::exp(static_cast<double>(j - 1) * std::log1p(-p)) * p;
}

double lifetime_mean(const LifetimeFamily& family, int k) {
  switch (family.kind()) {
    case LifetimeKind::GeometricDst:
      require_index(k, kMaxExactMeanIndex);
      return std::ldexp(1.0, k - 1);
    case LifetimeKind::ScaledBase: {
      if (k < 1) throw DomainError("lifetime index must be >= 1");
      const double mean = std::pow(family.alpha(), k) * family.base_mean();
      if (!std::isfinite(mean)) throw DomainError("lifetime mean overflows");
      return mean;
    }
  }
  return 0.0;
}

double sample_lifetime(const LifetimeFamily& family, int k, Rng& rng) {
  switch (family.kind()) {
    case LifetimeKind::GeometricDst: {
      require_index(k, kMaxSampledIndex);
      if (k == 1) return 1.0;
      const double p = std::ldexp(1.0, -k + 1);
      const double u = rng.uniform();
      const double j = std::ceil(std::log1p(-u) / std::log1p(-p));
      return j < 1.0 ? 1.0 : j;
    }
    case LifetimeKind::ScaledBase:
      if (k < 1) throw DomainError("lifetime index must be >= 1");
      return std::pow(family.alpha(), k) * family.base_mean() * rng.exponential();
  }
  return 0.0;
}

double coupling_alpha(int k) {
  if (k < 1) throw DomainError("coupling_alpha: k must be >= 1");
  if (k == 1) return 0.0;
  return 1.0 / -std::log1p(-std::ldexp(1.0, -k + 1));
}

CoupledPair sample_coupled_pair(int k, Rng& rng) {
  require_index(k, kMaxCoupledIndex);
  const double z = rng.exponential();
  const double scaled = coupling_alpha(k) * z;
  return CoupledPair{static_cast<std::int64_t>(std::floor(scaled)) + 1,
                     std::ldexp(z, k - 1), k};
}

}  // namespace renewfluct
