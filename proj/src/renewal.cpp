#include "renewfluct/renewal.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "renewfluct/error.hpp"
#include "renewfluct/limit_law.hpp"

namespace renewfluct {
namespace {

constexpr double kNegligibleMass = 1e-300;
// States this far above log2 of the step count carry less than 1e-300.
constexpr int kStateSlack = 50;

// Forward recursion P_{m+1}(k) = P_m(k)(1 - 2^{-k}) + P_m(k-1) 2^{-(k-1)} on
// the window [lo, hi] of states holding non-negligible mass. With an
// absorbing top the chain is stopped at `top`, so p[top] = P(X_m >= top).
class BirthChain {
 public:
  BirthChain(int top, bool absorbing_top)
      : top_(top), absorbing_(absorbing_top), p_(static_cast<std::size_t>(top) + 1, 0.0) {
    p_[0] = 1.0;
    up_.resize(p_.size());
    stay_.resize(p_.size());
    for (int k = 0; k <= top; ++k) {
      up_[static_cast<std::size_t>(k)] = std::ldexp(1.0, -k);
      stay_[static_cast<std::size_t>(k)] = 1.0 - up_[static_cast<std::size_t>(k)];
    }
    if (absorbing_) {
      up_[static_cast<std::size_t>(top)] = 0.0;
      stay_[static_cast<std::size_t>(top)] = 1.0;
    }
  }

  void step() {
    for (int k = hi_; k >= lo_; --k) {
      const auto i = static_cast<std::size_t>(k);
      const double mass = p_[i];
      const double up = mass * up_[i];
      p_[i] = mass * stay_[i];
      if (up == 0.0) continue;
      if (k == hi_) {
        if (k == top_ || up < kNegligibleMass) {
          dropped_ += up;
          continue;
        }
        ++hi_;
      }
      p_[i + 1] += up;
    }
    while (lo_ < hi_ && p_[static_cast<std::size_t>(lo_)] < kNegligibleMass) {
      dropped_ += p_[static_cast<std::size_t>(lo_)];
      p_[static_cast<std::size_t>(lo_)] = 0.0;
      ++lo_;
    }
  }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return hi_; }
  double mass(int k) const noexcept { return p_[static_cast<std::size_t>(k)]; }
  double dropped() const noexcept { return dropped_; }

 private:
  int top_;
  bool absorbing_;
  std::vector<double> p_;
  std::vector<double> up_;
  std::vector<double> stay_;
  int lo_ = 0;
  int hi_ = 0;
  double dropped_ = 0.0;
};

void require_steps(std::int64_t n, const char* what) {
  if (n < 0 || n > kMaxExactSteps) {
    throw DomainError(std::string(what) + ": step count outside [0, 2^26]");
  }
}

int state_cap(std::int64_t n) {
  return static_cast<int>(std::bit_width(static_cast<std::uint64_t>(n))) + kStateSlack;
}

}  // namespace

ExactDepthLaw depth_distribution_exact(std::int64_t n) {
  require_steps(n, "depth_distribution_exact");
  BirthChain chain(state_cap(n), false);
  for (std::int64_t m = 0; m < n; ++m) chain.step();

  std::vector<double> masses;
  masses.reserve(static_cast<std::size_t>(chain.hi() - chain.lo() + 1));
  for (int k = chain.lo(); k <= chain.hi(); ++k) masses.push_back(chain.mass(k));
  return ExactDepthLaw{IntPmf(chain.lo(), std::move(masses)), chain.dropped()};
}

double partial_sum_cdf_exact(const LifetimeFamily& family, std::int64_t j, std::int64_t t) {
  if (family.kind() != LifetimeKind::GeometricDst) {
    throw UnsupportedOperation("exact partial-sum law is only available for the DST family");
  }
  if (j < 0) throw DomainError("partial_sum_cdf_exact: j must be >= 0");
  require_steps(t, "partial_sum_cdf_exact");
  if (j == 0) return 1.0;
  if (j > t) return 0.0;  // every lifetime is at least 1
  BirthChain chain(static_cast<int>(j), true);
  for (std::int64_t m = 0; m < t; ++m) chain.step();
  return chain.mass(static_cast<int>(j));
}

CenteredLaw centered_count_distribution(std::int64_t n) {
  if (n < 1) throw DomainError("centered_count_distribution: n must be >= 1");
  auto exact = depth_distribution_exact(n);
  const auto shift =
      static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(n))) - 1;
  double eta = std::log2(static_cast<double>(n)) - static_cast<double>(shift);
  if (std::has_single_bit(static_cast<std::uint64_t>(n))) eta = 0.0;
  eta = std::clamp(eta, 0.0, std::nextafter(1.0, 0.0));
  return CenteredLaw{exact.pmf.shifted(-shift), eta, shift, exact.dropped_mass};
}

std::vector<std::int64_t> simulate_count(const RenewalConfig& config) {
  if (config.samples < 1) throw DomainError("simulate_count: samples must be >= 1");
  if (!(config.horizon > 0.0) || !std::isfinite(config.horizon)) {
    throw DomainError("simulate_count: horizon must be finite and > 0");
  }
  std::vector<std::int64_t> counts(config.samples);
  for (std::size_t r = 0; r < config.samples; ++r) {
    Rng rng(config.seed, config.first_stream + r);
    double sum = 0.0;
    std::int64_t n = 0;
    for (;;) {
      const double y = sample_lifetime(config.family, static_cast<int>(n + 1), rng);
      if (sum + y > config.horizon) break;
      sum += y;
      ++n;
    }
    counts[r] = n;
  }
  return counts;
}

std::vector<double> scaled_sum_sample(const LifetimeFamily& family, int n, std::size_t samples,
                                      Rng& rng) {
  if (n < 1) throw DomainError("scaled_sum_sample: n must be >= 1");
  const double scale = std::pow(family.alpha(), -n);
  std::vector<double> out(samples);
  for (auto& value : out) {
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) sum += sample_lifetime(family, k, rng);
    value = scale * sum;
  }
  return out;
}

KsResult ks_scaled_sum_exact(int n, int cap_multiplier) {
  if (n < 1 || n > 22) throw DomainError("ks_scaled_sum_exact: n must lie in [1, 22]");
  if (cap_multiplier < 2) throw DomainError("ks_scaled_sum_exact: cap multiplier must be >= 2");

  // F_n(m) = P(S_n <= m) = P(X_m >= n); F_n(0) = 0 since S_n >= n.
  BirthChain chain(n, true);
  const std::int64_t cap = static_cast<std::int64_t>(cap_multiplier) << n;
  double previous = 0.0;
  double sup = 0.0;
  for (std::int64_t m = 1; m <= cap; ++m) {
    chain.step();
    const double current = chain.mass(n);
    // Between jumps F_n is flat and S has a continuous CDF, so checking both
    // one-sided limits at every jump gives the exact supremum.
    const double limit = s_infinity_cdf_series(std::ldexp(static_cast<double>(m), -n));
    sup = std::max({sup, std::fabs(current - limit), std::fabs(previous - limit)});
    previous = current;
  }
  const double tail_limit = 1.0 - s_infinity_cdf_series(std::ldexp(static_cast<double>(cap), -n));
  const double bound = std::max(1.0 - previous, tail_limit) + chain.dropped();
  return KsResult{sup, bound};
}

}  // namespace renewfluct
