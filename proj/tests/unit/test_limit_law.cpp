#include <doctest.h>

#include <array>
#include <cmath>

#include "renewfluct/error.hpp"
#include "renewfluct/limit_law.hpp"
#include "renewfluct/rng.hpp"
#include "support.hpp"

using namespace renewfluct;

namespace {

// Frozen from tests/oracles/reference_values.py (mpmath, 60 digits).
constexpr double kB = 3.4627466194550636115;

constexpr std::array<double, 12> kCdfDyadic = {
    0.17367301178886503,     0.020417129023234153,    0.00096235996943071951,
    1.8688118411322048e-5,   1.5378603124909594e-7,   5.4896646224673418e-10,
    8.6593619200571086e-13,  6.1245165611149565e-16,  1.9649610527878833e-19,
    2.8868322910699922e-23,  1.9572202150899826e-27,  6.1633990280981071e-32};

constexpr std::array<double, 12> kPmfEta0 = {
    0.0011608427191897474,  0.061099692058055844,   0.34333564222146534,
    0.42073042153167207,    0.15325588276563087,    0.019454769053803434,
    0.00094367185101939746, 1.8534332380072952e-5,  1.532370647868492e-7,
    5.4810052605472847e-10, 8.6532374034959936e-13, 6.1225516000621686e-16};

constexpr std::array<double, 12> kPmfEtaHalf = {
    4.2259946430052084e-5,  0.012012546914555113,   0.18053043550631257,
    0.44862852694922866,    0.29195334882253096,    0.061871306164781006,
    0.0048120254941020663,  0.00014766533226780386, 1.8741675334583833e-6,
    1.0162363132909813e-8,  2.4097016053434091e-11, 2.5425819965330465e-14};

bool rel_close(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::fabs(want);
}

}  // namespace

TEST_CASE("euler product") {
  const double b = euler_b();
  CHECK(b > 3.4627466);
  CHECK(b < 3.4627467);
  CHECK(rel_close(b, kB, 1e-15));
  long double prod = 1.0L;
  for (int j = 1; j <= 64; ++j) prod *= 1.0L - std::ldexp(1.0L, -j);
  CHECK(rel_close(1.0 / b, static_cast<double>(prod), 1e-15));
}

TEST_CASE("mixture coefficients") {
  const auto mix = mixture_coefficients(32);
  const double b = euler_b();
  CHECK(mix.coefficient(1) == b);
  CHECK(mix.coefficient(2) == -b);
  CHECK(mix.coefficient(3) == doctest::Approx(b / 3).epsilon(1e-15));
  CHECK(std::fabs(mix.total() - 1.0) <= 1e-13);
  for (int k = 1; k < 32; ++k) CHECK(mix.coefficient(k) * mix.coefficient(k + 1) < 0.0);
  CHECK(SignedExpMixture::rate(3) == 8.0);
  CHECK_THROWS_AS(mixture_coefficients(0), DomainError);
  CHECK_THROWS_AS(mixture_coefficients(65), DomainError);
  CHECK_THROWS_AS(mix.coefficient(33), DomainError);
}

TEST_CASE("partial fraction weights") {
  CHECK(partial_fraction_coefficients(1) == std::vector<double>{1.0});
  const auto two = partial_fraction_coefficients(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(two[1] == doctest::Approx(-1.0).epsilon(1e-15));
  for (int n = 1; n <= 12; ++n) {
    double sum = 0.0;
    for (double a : partial_fraction_coefficients(n)) sum += a;
    CHECK(std::fabs(sum - 1.0) <= 1e-12);
  }
  // Large n approaches the infinite coefficients.
  const auto big = partial_fraction_coefficients(32);
  const auto mix = mixture_coefficients(32);
  for (int k = 1; k <= 5; ++k) CHECK(rel_close(big[k - 1], mix.coefficient(k), 1e-8));
}

TEST_CASE("partial fraction cdf matches sums of exponentials") {
  // Oracle: independent convolution by Monte Carlo, Exp(2) + Exp(4) + Exp(8).
  const auto w = partial_fraction_coefficients(3);
  auto cdf = [&](double t) {
    double s = 0.0;
    for (int k = 1; k <= 3; ++k) s -= w[k - 1] * std::expm1(-std::ldexp(t, k));
    return s;
  };
  Rng rng(2024);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = rng.exponential() / 2 + rng.exponential() / 4 + rng.exponential() / 8;
  CHECK(support::empirical_ks(xs, cdf) <= 0.002);
}

TEST_CASE("s_infinity cdf against high-precision values") {
  CHECK(s_infinity_cdf(0.0) == 0.0);
  CHECK_THROWS_AS(s_infinity_cdf(-1.0), DomainError);
  CHECK(s_infinity_cdf(60.0) == 1.0);
  for (int j = 1; j <= 12; ++j) {
    CAPTURE(j);
    CHECK(rel_close(s_infinity_cdf(std::ldexp(1.0, -j)), kCdfDyadic[j - 1], 1e-12));
  }
  CHECK(rel_close(s_infinity_cdf(0.3), 0.039208786786979191, 1e-13));
  CHECK(rel_close(s_infinity_cdf(1.0), 0.5944034333205371, 1e-14));
  CHECK(rel_close(s_infinity_cdf(2.0), 0.93773907554200243, 1e-14));
}

TEST_CASE("both cdf routes agree where the series is still accurate") {
  for (double t : {0.02, 0.05, 0.08, 0.1, 0.12, 0.124, 0.1249999, 0.125, 0.2, 0.4, 0.7, 0.99}) {
    CAPTURE(t);
    const double series = s_infinity_cdf_series(t);
    CHECK(std::fabs(s_infinity_cdf_small(t) - series) <= 1e-14 + 1e-11 * series);
  }
  CHECK(std::fabs(s_infinity_cdf(std::nextafter(0.125, 0.0)) - s_infinity_cdf(0.125)) < 1e-14);
}

TEST_CASE("s_infinity cdf is monotone and the survival complements it") {
  double prev = 0.0;
  for (double t = 1e-3; t < 12.0; t *= 1.01) {
    const double f = s_infinity_cdf(t);
    CHECK(f >= prev);
    CHECK(std::fabs(f + s_infinity_survival(t) - 1.0) <= 1e-14);
    prev = f;
  }
}

TEST_CASE("small-ball bound") {
  for (int j = 2; j <= 8; ++j) {
    CHECK(s_infinity_cdf(std::ldexp(1.0, -j)) <= std::ldexp(1.0, -j * (j - 1) / 2));
  }
}

TEST_CASE("survival decays at least geometrically") {
  const double s5 = s_infinity_survival(5.0);
  const double s10 = s_infinity_survival(10.0);
  const double s20 = s_infinity_survival(20.0);
  CHECK(s5 > 0.0);
  CHECK(s10 < s5);
  CHECK(s20 < s10);
  CHECK(s10 <= s5 * std::exp(-9.0));
  CHECK(s20 <= s10 * std::exp(-19.0));
}

TEST_CASE("density integrates to the cdf") {
  // Simpson on [0.25, 2].
  const int m = 2000;
  const double a = 0.25, b = 2.0, h = (b - a) / m;
  double s = s_infinity_density(a) + s_infinity_density(b);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * s_infinity_density(a + i * h);
  CHECK(s * h / 3 == doctest::Approx(s_infinity_cdf(b) - s_infinity_cdf(a)).epsilon(1e-9));
  CHECK(s_infinity_density(0.0) == 0.0);
  CHECK(s_infinity_density(0.01) >= 0.0);
}

TEST_CASE("q pmf against high-precision values") {
  for (int i = 0; i < 12; ++i) {
    const std::int64_t j = i - 3;
    CAPTURE(j);
    CHECK(rel_close(q_pmf(0.0, j), kPmfEta0[i], 1e-11));
    CHECK(rel_close(q_pmf(0.5, j), kPmfEtaHalf[i], 1e-11));
  }
}

TEST_CASE("q law identities") {
  for (double eta : {0.0, 0.1, 0.5, 0.77, 1.0}) {
    CAPTURE(eta);
    double prev = 0.0;
    double mass = 0.0;
    for (std::int64_t x = -10; x <= 40; ++x) {
      const double c = q_cdf(eta, x);
      CHECK(c >= prev);
      CHECK(std::fabs(c + q_tail(eta, x + 1) - 1.0) <= 1e-14);
      const double p = q_pmf(eta, x);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      mass += p;
      prev = c;
    }
    CHECK(mass >= 1.0 - 1e-10);
    CHECK(std::fabs(q_tail(eta, -50) - 1.0) <= 1e-14);
    for (std::int64_t j = 2; j <= 8; ++j) {
      CHECK(q_tail(eta, j) <= s_infinity_cdf(std::ldexp(1.0, 1 - static_cast<int>(j))));
    }
    for (std::int64_t j = 3; j <= 8; ++j) {
      CHECK(q_tail(eta, j) <= std::ldexp(1.0, -static_cast<int>((j - 1) * (j - 2) / 2)));
    }
  }
  for (std::int64_t x = -20; x <= 30; ++x) {
    CHECK(q_cdf(0.0, x) == doctest::Approx(q_cdf(1.0, x + 1)).epsilon(1e-15));
    CHECK(q_pmf(0.0, x) == doctest::Approx(q_pmf(1.0, x + 1)).epsilon(1e-15));
  }
  CHECK(q_cdf_real(0.3, 2.7) == q_cdf(0.3, 2));
  CHECK(q_cdf_real(0.3, -0.5) == q_cdf(0.3, -1));
  CHECK_THROWS_AS(q_cdf(1.5, 0), DomainError);
  CHECK_THROWS_AS(LimitLaw(-0.1), DomainError);
}

TEST_CASE("q cdf is monotone in eta") {
  for (std::int64_t x = -3; x <= 6; ++x) {
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
      const double c = q_cdf(i / 100.0, x);
      CHECK(c <= prev);
      prev = c;
    }
  }
}

TEST_CASE("superexponential tail proxy") {
  // Frozen q_tail(0, j) * exp(0.3 j^2), j = 4..9.
  constexpr std::array<double, 6> want = {0.0022708010707992984,  0.00027805166724923101,
                                          2.6910775776340159e-5,  2.0970789235374378e-6,
                                          1.3351371058255923e-7,  7.0260276886530087e-9};
  double prev = INFINITY;
  for (int j = 4; j <= 9; ++j) {
    const double v = q_tail(0.0, j) * std::exp(0.3 * j * j);
    CHECK(rel_close(v, want[j - 4], 1e-11));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("mean of Q_eta shifts by one across the period") {
  auto mean = [](double eta) {
    double m = 0.0;
    for (std::int64_t j = -40; j <= 40; ++j) m += static_cast<double>(j) * q_pmf(eta, j);
    return m;
  };
  CHECK(mean(1.0) - mean(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mean(0.5) > mean(0.0));
  CHECK(mean(0.5) < mean(1.0));
}

TEST_CASE("sampling the series") {
  Rng rng(77);
  std::vector<double> xs(1000000);
  for (auto& x : xs) x = sample_s_infinity(rng);
  const double n = static_cast<double>(xs.size());
  CHECK(std::fabs(support::mean(xs) - 1.0) <= 4.0 * std::sqrt(1.0 / 3.0 / n));
  // Var of the sample variance for this law: estimate from the fourth moment.
  const double m = support::mean(xs);
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - m, 4);
  m4 /= n;
  const double var = support::variance(xs);
  CHECK(std::fabs(var - 1.0 / 3.0) <= 4.0 * std::sqrt((m4 - var * var) / n));
  CHECK(support::empirical_ks(xs, [](double t) { return s_infinity_cdf(t); }) <= 0.002);
}

TEST_CASE("sampling Q_eta") {
  for (double eta : {0.0, 0.5}) {
    Rng rng(31, static_cast<std::uint64_t>(eta * 2));
    std::vector<std::int64_t> qs(1000000);
    for (auto& q : qs) q = sample_q(eta, rng);
    CHECK(support::tv_to_pmf(qs, -10, 20, [eta](std::int64_t j) { return q_pmf(eta, j); }) <=
          0.003);
    const auto freq = support::frequencies(qs);
    for (std::int64_t x = -3; x <= 5; ++x) {
      double emp = 0.0;
      for (const auto& [j, f] : freq) {
        if (j <= x) emp += f;
      }
      CHECK(std::fabs(emp - q_cdf(eta, x)) <= 0.003);
    }
  }
}

TEST_CASE("eta shifts every draw by one under a shared stream") {
  Rng a(5, 9), b(5, 9);
  for (int i = 0; i < 10000; ++i) CHECK(sample_q(1.0, b) == sample_q(0.0, a) + 1);

  // A draw in (1/2, 1] lands on 0 at eta = 0.
  Rng c(6), d(6);
  for (int i = 0; i < 10000; ++i) {
    const double s = sample_s_infinity(c);
    const auto q = sample_q(0.0, d);
    if (s > 0.5 && s < 1.0) CHECK(q == 0);
  }
}

TEST_CASE("general families sample a limit law with the right mean") {
  // E S = sum_i alpha^{-i} E Y = alpha/(alpha-1) * base mean.
  const auto fam = LifetimeFamily::scaled_exponential(GrowthRate(3.0), 1.0);
  Rng rng(8);
  std::vector<double> xs(200000);
  for (auto& x : xs) x = sample_s_infinity(fam, rng);
  const double se = std::sqrt(support::variance(xs) / xs.size());
  CHECK(std::fabs(support::mean(xs) - 1.5) <= 5.0 * se);

  // The DST family reduces to the dyadic series: compare draws in law.
  const auto dst = LifetimeFamily::geometric_dst();
  std::vector<double> ys(200000);
  for (auto& y : ys) y = sample_s_infinity(dst, rng);
  CHECK(support::empirical_ks(ys, [](double t) { return s_infinity_cdf(t); }) <= 0.005);
}
