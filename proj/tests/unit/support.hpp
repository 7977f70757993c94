#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace support {

// Two-sided KS distance between the empirical CDF of `sample` and `cdf`.
inline double empirical_ks(std::vector<double> sample, const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    worst = std::max({worst, std::fabs(f - static_cast<double>(i) / n),
                      std::fabs(static_cast<double>(i + 1) / n - f)});
  }
  return worst;
}

inline std::map<std::int64_t, double> frequencies(const std::vector<std::int64_t>& sample) {
  std::map<std::int64_t, double> freq;
  for (auto v : sample) freq[v] += 1.0;
  for (auto& [k, v] : freq) v /= static_cast<double>(sample.size());
  return freq;
}

// Half the l1 distance between sample frequencies and a mass function known
// on [lo, hi]; mass outside the range is counted through 1 - sum.
inline double tv_to_pmf(const std::vector<std::int64_t>& sample, std::int64_t lo, std::int64_t hi,
                        const std::function<double(std::int64_t)>& pmf) {
  const auto freq = frequencies(sample);
  double l1 = 0.0;
  double covered = 0.0;
  for (std::int64_t j = lo; j <= hi; ++j) {
    const double p = pmf(j);
    covered += p;
    const auto it = freq.find(j);
    l1 += std::fabs((it == freq.end() ? 0.0 : it->second) - p);
  }
  for (const auto& [j, f] : freq) {
    if (j < lo || j > hi) l1 += f;
  }
  l1 += std::max(0.0, 1.0 - covered);
  return 0.5 * l1;
}

inline double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace support
