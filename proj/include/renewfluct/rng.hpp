#pragma once

#include <cstdint>
#include <limits>

namespace renewfluct {

/// Counter-based 64-bit generator addressed by (seed, stream).
///
/// Draw i of stream s under seed k is a pure function of (k, s, i), so
/// replicates can be assigned their own stream and evaluated in any order or
/// on any thread without changing results. The output mix is the SplitMix64
/// finalizer applied to a Weyl counter; every distribution below is computed
/// here rather than through <random> so the streams are identical across
/// standard libraries.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Exp(1) by inversion; strictly positive and finite.
  double exponential() noexcept;
  /// One fair bit; consumes 64-bit draws lazily.
  bool bit() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t bit_buffer_ = 0;
  int bits_left_ = 0;
};

}  // namespace renewfluct
