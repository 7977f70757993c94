#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace renewfluct {

/// Finitely supported probability mass function on the integers:
/// mass(offset + i) = masses[i].
class IntPmf {
 public:
  /// Validates nonnegative masses summing to one within 1e-12.
  IntPmf(std::int64_t offset, std::vector<double> masses);

  static IntPmf point_mass(std::int64_t j);
  /// Relative frequencies of a sample; the sample must be nonempty.
  static IntPmf empirical(std::span<const std::int64_t> sample);

  std::int64_t offset() const noexcept { return offset_; }
  std::int64_t min_support() const noexcept { return offset_; }
  std::int64_t max_support() const noexcept {
    return offset_ + static_cast<std::int64_t>(masses_.size()) - 1;
  }
  std::span<const double> masses() const noexcept { return masses_; }
  std::size_t size() const noexcept { return masses_.size(); }

  double mass(std::int64_t j) const noexcept;
  /// P(X <= j).
  double cdf(std::int64_t j) const noexcept;
  double total() const noexcept;
  double mean() const noexcept;

  /// Law of X + delta.
  IntPmf shifted(std::int64_t delta) const;

 private:
  std::int64_t offset_;
  std::vector<double> masses_;
};

}  // namespace renewfluct
