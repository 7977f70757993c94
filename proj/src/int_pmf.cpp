#include "renewfluct/int_pmf.hpp"

#include <algorithm>
#include <cmath>

#include "renewfluct/error.hpp"

namespace renewfluct {

IntPmf::IntPmf(std::int64_t offset, std::vector<double> masses)
    : offset_(offset), masses_(std::move(masses)) {
  if (masses_.empty()) throw DomainError("pmf needs a nonempty support");
  long double sum = 0.0L;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("pmf masses must be finite and >= 0");
    sum += m;
  }
  if (std::fabs(static_cast<double>(sum) - 1.0) > 1e-12) {
    throw DomainError("pmf masses must sum to 1");
  }
}

IntPmf IntPmf::point_mass(std::int64_t j) { return IntPmf(j, {1.0}); }

IntPmf IntPmf::empirical(std::span<const std::int64_t> sample) {
  if (sample.empty()) throw DomainError("empirical pmf of an empty sample");
  const auto [lo, hi] = std::minmax_element(sample.begin(), sample.end());
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(*hi - *lo + 1), 0);
  for (std::int64_t v : sample) ++counts[static_cast<std::size_t>(v - *lo)];
  std::vector<double> masses(counts.size());
  const double n = static_cast<double>(sample.size());
  std::transform(counts.begin(), counts.end(), masses.begin(),
                 [n](std::uint64_t c) { return static_cast<double>(c) / n; });
  return IntPmf(*lo, std::move(masses));
}

double IntPmf::mass(std::int64_t j) const noexcept {
  if (j < min_support() || j > max_support()) return 0.0;
  return masses_[static_cast<std::size_t>(j - offset_)];
}

double IntPmf::cdf(std::int64_t j) const noexcept {
  if (j < min_support()) return 0.0;
  const std::int64_t last = std::min(j, max_support());
  long double sum = 0.0L;
  for (std::int64_t i = min_support(); i <= last; ++i) {
    sum += masses_[static_cast<std::size_t>(i - offset_)];
  }
  return static_cast<double>(sum);
}

double IntPmf::total() const noexcept {
  long double sum = 0.0L;
  for (double m : masses_) sum += m;
  return static_cast<double>(sum);
}

double IntPmf::mean() const noexcept {
  long double sum = 0.0L;
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    sum += static_cast<long double>(offset_ + static_cast<std::int64_t>(i)) * masses_[i];
  }
  return static_cast<double>(sum);
}

IntPmf IntPmf::shifted(std::int64_t delta) const { return IntPmf(offset_ + delta, masses_); }

}  // namespace renewfluct
