#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "renewfluct/lifetimes.hpp"
#include "renewfluct/rng.hpp"

namespace renewfluct {

/// Euler product b = prod_{j>=1} (1 - 2^{-j})^{-1} ~ 3.4627466194550636.
double euler_b();

/// Signed combination sum_k a_k Exp(2^k) of exponential laws. The a_k
/// alternate in sign, so this is not a probability mixture; it represents the
/// law of S = sum_{k>=1} 2^{-k} Z_k with Z_k i.i.d. Exp(1).
class SignedExpMixture {
 public:
  explicit SignedExpMixture(std::vector<double> coeffs);

  int order() const noexcept { return static_cast<int>(coeffs_.size()); }
  /// a_k, 1-based.
  double coefficient(int k) const;
  static double rate(int k) noexcept;
  std::span<const double> coefficients() const noexcept { return coeffs_; }
  double total() const noexcept;

  /// sum_k a_k (1 - e^{-2^k t}), each term through expm1.
  double cdf(double t) const;

 private:
  std::vector<double> coeffs_;
};

/// a_1 = b, a_{k+1} = a_k / (1 - 2^k), for 1 <= K <= 64.
SignedExpMixture mixture_coefficients(int order);

/// Partial-fraction weights a_{n,k} of prod_{k<=n} (1 - 2^{-k} z)^{-1}, 1 <= n <= 32.
std::vector<double> partial_fraction_coefficients(int n);

/// P(S <= t). Arguments below 1/8 go through a cancellation-free route
/// (see s_infinity_cdf_small), so tiny probabilities keep relative accuracy.
double s_infinity_cdf(double t);

/// P(S <= t) straight from the signed series. Absolute error ~1e-16, but
/// relative accuracy is lost once the result drops below ~1e-14.
double s_infinity_cdf_series(double t);

/// P(S <= t) for 0 < t < 1 by splitting S = V + 2^{-j} S', with V the first
/// j scaled exponentials and 2^j t in [1/2, 1). The law of 2^j V has a
/// rapidly converging power series on [0, 1], and the remaining convolution
/// with the density of S' is a positive integrand, so nothing cancels.
double s_infinity_cdf_small(double t);

/// P(S > t).
double s_infinity_survival(double t);

/// Density of S.
double s_infinity_density(double t);

/// Q_eta = law of floor(-log2 S + eta), 0 <= eta <= 1.
/// P(Q_eta <= x).
double q_cdf(double eta, std::int64_t x);
/// P(Q_eta <= floor(x)) for a real argument.
double q_cdf_real(double eta, double x);
double q_pmf(double eta, std::int64_t j);
/// P(Q_eta >= j), evaluated directly as P(S <= 2^{eta-j}).
double q_tail(double eta, std::int64_t j);

/// Truncated draw sum_{k<=truncation} 2^{-k} Z_k of S.
double sample_s_infinity(Rng& rng, int truncation = 64);
/// floor(-log2 S + eta) from one sample_s_infinity draw.
std::int64_t sample_q(double eta, Rng& rng);

/// Draw of S = sum_{i>=0} alpha^{-i} Y_inf,i for a general family, truncated
/// once alpha^{-i} < 2^{-64}.
double sample_s_infinity(const LifetimeFamily& family, Rng& rng);
/// floor(-log_alpha S + eta) for a general family.
std::int64_t sample_q(const LifetimeFamily& family, double eta, Rng& rng);

/// One member Q_eta of the limit family (alpha = 2, Exp(2) limit).
class LimitLaw {
 public:
  explicit LimitLaw(double eta);

  double eta() const noexcept { return eta_; }
  const SignedExpMixture& mixture() const noexcept;

  double cdf(std::int64_t x) const { return q_cdf(eta_, x); }
  double pmf(std::int64_t j) const { return q_pmf(eta_, j); }
  double tail(std::int64_t j) const { return q_tail(eta_, j); }
  std::int64_t sample(Rng& rng) const { return sample_q(eta_, rng); }

 private:
  double eta_;
};

}  // namespace renewfluct
