#pragma once

#include <cstdint>
#include <vector>

#include "renewfluct/int_pmf.hpp"
#include "renewfluct/lifetimes.hpp"
#include "renewfluct/rng.hpp"

namespace renewfluct {

/// Exact law of the birth chain X_n (X_0 = 0, up-probability 2^{-k} from
/// state k). Masses below 1e-300 are dropped; their total is reported.
struct ExactDepthLaw {
  IntPmf pmf;
  double dropped_mass;
};

/// Largest step count accepted by the exact engines.
inline constexpr std::int64_t kMaxExactSteps = std::int64_t{1} << 26;

ExactDepthLaw depth_distribution_exact(std::int64_t n);

/// P(S_j <= t) for the GeometricDst family, read off the chain as P(X_t >= j).
double partial_sum_cdf_exact(const LifetimeFamily& family, std::int64_t j, std::int64_t t);

/// Law of X_n - floor(log2 n) together with eta = {log2 n}.
struct CenteredLaw {
  IntPmf pmf;
  double eta;
  std::int64_t shift;  ///< floor(log2 n)
  double dropped_mass;
};

CenteredLaw centered_count_distribution(std::int64_t n);

struct RenewalConfig {
  LifetimeFamily family = LifetimeFamily::geometric_dst();
  double horizon = 1.0;
  std::size_t samples = 1;
  std::uint64_t seed = 0;
  /// Replicate r draws from stream (first_stream + r).
  std::uint64_t first_stream = 0;
};

/// N_t = sup{n : S_n <= t} per replicate, in replicate order.
std::vector<std::int64_t> simulate_count(const RenewalConfig& config);

/// Draws of alpha^{-n} S_n.
std::vector<double> scaled_sum_sample(const LifetimeFamily& family, int n, std::size_t samples,
                                      Rng& rng);

struct KsResult {
  double ks;
  double truncation_bound;
};

/// Kolmogorov-Smirnov distance between 2^{-n} S_n (GeometricDst) and S,
/// scanning every jump of the step CDF up to cap_multiplier * 2^n. Mass
/// beyond the cap and dropped DP mass are reported in truncation_bound.
KsResult ks_scaled_sum_exact(int n, int cap_multiplier = 8);

}  // namespace renewfluct
