#include "renewfluct/limit_law.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "renewfluct/error.hpp"

namespace renewfluct {
namespace {

constexpr int kMaxOrder = 64;
constexpr double kNegligibleCoefficient = 1e-18;
// Below this argument the signed series loses relative accuracy.
constexpr double kSmallArgument = 0.125;
// Beyond |x| of this size Q_eta is 0 or 1 to every representable digit.
constexpr std::int64_t kSaturatedIndex = 2048;

const SignedExpMixture& full_mixture() {
  static const SignedExpMixture mixture = mixture_coefficients(kMaxOrder);
  return mixture;
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw DomainError("eta must lie in [0, 1]");
  }
}

// 2^{e} * 2^{eta} for integer e, without overflow in the integer exponent.
double scaled_power(double eta, std::int64_t e) {
  return std::ldexp(std::exp2(eta), static_cast<int>(e));
}

struct GaussLegendre {
  static constexpr int kPoints = 64;
  std::array<double, kPoints> nodes{};    // on [-1, 1]
  std::array<double, kPoints> weights{};
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule = [] {
    GaussLegendre r;
    constexpr int n = GaussLegendre::kPoints;
    const long double pi = 3.141592653589793238462643383279502884L;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
      long double dp = 0.0L;
      for (int iter = 0; iter < 100; ++iter) {
        long double p0 = 1.0L;
        long double p1 = x;
        for (int k = 2; k <= n; ++k) {
          const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0L);
        const long double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-19L) break;
      }
      const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
      r.nodes[i] = static_cast<double>(-x);
      r.nodes[n - 1 - i] = static_cast<double>(x);
      r.weights[i] = r.weights[n - 1 - i] = static_cast<double>(w);
    }
    return r;
  }();
  return rule;
}

// P(2^j V <= x) / (2^{-j(j-1)/2} x^j / j!) for x in [0, 1], where
// 2^j V = sum_{i<j} 2^i Z_i. Expanding the Laplace transform of a sum of
// exponentials with rates mu_i = 2^{-i} gives
//   sum_m (-1)^m h_m(mu) x^m j! / (j+m)!
// with h_m the complete homogeneous symmetric polynomials; h_m <= b and the
// ratio of successive terms is below x / (j+m+1), so the series is benign.
class LeadingBlockCdf {
 public:
  explicit LeadingBlockCdf(int j) : j_(j) {
    h_.fill(0.0);
    h_[0] = 1.0;
    for (int i = 0; i < j; ++i) {
      const double mu = std::ldexp(1.0, -i);
      for (int m = 1; m < kTerms; ++m) h_[m] += mu * h_[m - 1];
    }
  }

  double relative(double x) const {
    double sum = 0.0;
    double factor = 1.0;  // x^m j! / (j+m)!
    for (int m = 0; m < kTerms; ++m) {
      const double term = h_[m] * factor;
      sum += (m % 2 == 0) ? term : -term;
      if (term < 1e-18 * sum) break;
      factor *= x / static_cast<double>(j_ + m + 1);
    }
    return sum;
  }

 private:
  static constexpr int kTerms = 48;
  int j_;
  std::array<double, kTerms> h_{};
};

}  // namespace

double euler_b() {
  static const double b = [] {
    long double product = 1.0L;
    for (int j = 1; j <= kMaxOrder; ++j) {
      const long double gap = std::ldexp(1.0L, -j);
      if (gap < kNegligibleCoefficient) break;
      product *= 1.0L - gap;
    }
    return static_cast<double>(1.0L / product);
  }();
  return b;
}

SignedExpMixture::SignedExpMixture(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw DomainError("mixture needs at least one coefficient");
}

double SignedExpMixture::coefficient(int k) const {
  if (k < 1 || k > order()) throw DomainError("mixture index out of range");
  return coeffs_[static_cast<std::size_t>(k - 1)];
}

double SignedExpMixture::rate(int k) noexcept { return std::ldexp(1.0, k); }

double SignedExpMixture::total() const noexcept {
  long double sum = 0.0L;
  for (double a : coeffs_) sum += a;
  return static_cast<double>(sum);
}

double SignedExpMixture::cdf(double t) const {
  if (t < 0.0) throw DomainError("cdf argument must be >= 0");
  if (t == 0.0) return 0.0;
  double sum = 0.0;
  for (int k = 1; k <= order(); ++k) {
    const double a = coeffs_[static_cast<std::size_t>(k - 1)];
    if (std::fabs(a) < kNegligibleCoefficient) break;
    sum -= a * std::expm1(-std::ldexp(t, k));
  }
  return sum;
}

SignedExpMixture mixture_coefficients(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw DomainError("mixture order must lie in [1, 64]");
  }
  std::vector<double> coeffs(static_cast<std::size_t>(order));
  long double a = euler_b();
  for (int k = 1; k <= order; ++k) {
    coeffs[static_cast<std::size_t>(k - 1)] = static_cast<double>(a);
    a /= 1.0L - std::ldexp(1.0L, k);
  }
  return SignedExpMixture(std::move(coeffs));
}

std::vector<double> partial_fraction_coefficients(int n) {
  if (n < 1 || n > 32) throw DomainError("partial fraction order must lie in [1, 32]");
  std::vector<long double> lower(static_cast<std::size_t>(n));  // prod_{j<k} (1 - 2^j)^{-1}
  std::vector<long double> upper(static_cast<std::size_t>(n));  // prod_{j<=m} (1 - 2^{-j})^{-1}
  lower[0] = upper[0] = 1.0L;
  for (int i = 1; i < n; ++i) {
    lower[static_cast<std::size_t>(i)] =
        lower[static_cast<std::size_t>(i - 1)] / (1.0L - std::ldexp(1.0L, i));
    upper[static_cast<std::size_t>(i)] =
        upper[static_cast<std::size_t>(i - 1)] / (1.0L - std::ldexp(1.0L, -i));
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    out[static_cast<std::size_t>(k - 1)] = static_cast<double>(
        lower[static_cast<std::size_t>(k - 1)] * upper[static_cast<std::size_t>(n - k)]);
  }
  return out;
}

double s_infinity_cdf_series(double t) {
  if (t < 0.0) throw DomainError("s_infinity_cdf: t must be >= 0");
  return std::clamp(full_mixture().cdf(t), 0.0, 1.0);
}

double s_infinity_density(double t) {
  if (t < 0.0) throw DomainError("s_infinity_density: t must be >= 0");
  if (t == 0.0) return 0.0;
  const auto coeffs = full_mixture().coefficients();
  double sum = 0.0;
  for (int k = 1; k <= static_cast<int>(coeffs.size()); ++k) {
    const double a = coeffs[static_cast<std::size_t>(k - 1)];
    const double rate = std::ldexp(1.0, k);
    const double x = rate * t;
    if (a == 0.0 || x > 745.0) break;
    sum += a * rate * std::exp(-x);
  }
  return sum > 0.0 ? sum : 0.0;
}

double s_infinity_cdf_small(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("s_infinity_cdf_small: t must lie in (0, 1)");
  int exponent = 0;
  const double tau = std::frexp(t, &exponent);  // t = tau 2^exponent, tau in [1/2, 1)
  const int j = -exponent;
  const std::int64_t scale = static_cast<std::int64_t>(j) * (j - 1) / 2;
  if (scale > 1100) return 0.0;

  const LeadingBlockCdf block(j);
  const auto& rule = gauss_legendre();
  const double half = 0.5 * tau;
  double integral = 0.0;
  for (int i = 0; i < GaussLegendre::kPoints; ++i) {
    const double s = half * (rule.nodes[static_cast<std::size_t>(i)] + 1.0);
    const double x = tau - s;
    integral += rule.weights[static_cast<std::size_t>(i)] * std::pow(x, j) *
                block.relative(x) * s_infinity_density(s);
  }
  integral *= half;
  return std::ldexp(integral / std::tgamma(j + 1.0), static_cast<int>(-scale));
}

double s_infinity_cdf(double t) {
  if (t < 0.0) throw DomainError("s_infinity_cdf: t must be >= 0");
  if (t == 0.0) return 0.0;
  if (t < kSmallArgument) return s_infinity_cdf_small(t);
  return s_infinity_cdf_series(t);
}

double s_infinity_survival(double t) {
  if (t < 0.0) throw DomainError("s_infinity_survival: t must be >= 0");
  if (t < kSmallArgument) return 1.0 - s_infinity_cdf(t);
  const auto coeffs = full_mixture().coefficients();
  double sum = 0.0;
  for (int k = 1; k <= static_cast<int>(coeffs.size()); ++k) {
    const double a = coeffs[static_cast<std::size_t>(k - 1)];
    const double factor = std::exp(-std::ldexp(t, k));
    if (std::fabs(a) < kNegligibleCoefficient && factor < 1.0) break;
    if (factor == 0.0) break;
    sum += a * factor;
  }
  return std::clamp(sum, 0.0, 1.0);
}

double q_cdf(double eta, std::int64_t x) {
  require_eta(eta);
  if (eta == 1.0) {
    eta = 0.0;
    --x;
  }
  if (x < -kSaturatedIndex) return 0.0;
  if (x > kSaturatedIndex) return 1.0;
  // Q_eta <= x  <=>  S > 2^{eta-1-x}
  return s_infinity_survival(scaled_power(eta, -1 - x));
}

double q_cdf_real(double eta, double x) {
  require_eta(eta);
  if (std::isnan(x)) throw DomainError("q_cdf_real: argument is NaN");
  const double fl = std::floor(x);
  if (fl < static_cast<double>(-kSaturatedIndex)) return 0.0;
  if (fl > static_cast<double>(kSaturatedIndex)) return 1.0;
  return q_cdf(eta, static_cast<std::int64_t>(fl));
}

double q_tail(double eta, std::int64_t j) {
  require_eta(eta);
  if (eta == 1.0) {
    eta = 0.0;
    --j;
  }
  if (j < -kSaturatedIndex) return 1.0;
  if (j > kSaturatedIndex) return 0.0;
  // Q_eta >= j  <=>  S <= 2^{eta-j}
  return s_infinity_cdf(scaled_power(eta, -j));
}

double q_pmf(double eta, std::int64_t j) {
  require_eta(eta);
  if (eta == 1.0) {
    eta = 0.0;
    --j;
  }
  if (j < -kSaturatedIndex || j > kSaturatedIndex) return 0.0;
  double mass = 0.0;
  if (scaled_power(eta, -j) < kSmallArgument) {
    mass = q_tail(eta, j) - q_tail(eta, j + 1);
  } else {
    mass = q_cdf(eta, j) - q_cdf(eta, j - 1);
  }
  return std::clamp(mass, 0.0, 1.0);
}

double sample_s_infinity(Rng& rng, int truncation) {
  if (truncation < 1) throw DomainError("truncation must be >= 1");
  double sum = 0.0;
  for (int k = 1; k <= truncation; ++k) sum += std::ldexp(rng.exponential(), -k);
  return sum;
}

std::int64_t sample_q(double eta, Rng& rng) {
  require_eta(eta);
  const double v = -std::log2(sample_s_infinity(rng));
  if (eta == 1.0) return static_cast<std::int64_t>(std::floor(v)) + 1;
  return static_cast<std::int64_t>(std::floor(v + eta));
}

double sample_s_infinity(const LifetimeFamily& family, Rng& rng) {
  const double alpha = family.alpha();
  const int terms = static_cast<int>(std::ceil(64.0 * std::log(2.0) / std::log(alpha))) + 1;
  double sum = 0.0;
  double weight = 1.0;
  for (int i = 0; i < terms; ++i) {
    sum += weight * family.sample_limit(rng);
    weight /= alpha;
  }
  return sum;
}

std::int64_t sample_q(const LifetimeFamily& family, double eta, Rng& rng) {
  require_eta(eta);
  const double v = -std::log(sample_s_infinity(family, rng)) / std::log(family.alpha());
  if (eta == 1.0) return static_cast<std::int64_t>(std::floor(v)) + 1;
  return static_cast<std::int64_t>(std::floor(v + eta));
}

LimitLaw::LimitLaw(double eta) : eta_(eta) { require_eta(eta); }

const SignedExpMixture& LimitLaw::mixture() const noexcept { return full_mixture(); }

}  // namespace renewfluct
