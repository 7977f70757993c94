#include "renewfluct/rng.hpp"

#include <cmath>

namespace renewfluct {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed),
      stream_(stream),
      key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

Rng::result_type Rng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::exponential() noexcept {
  // 1 - u lies in (0, 1], so the result is finite; exactly 0 is replaced by
  // the smallest draw to keep lifetimes strictly positive.
  const double e = -std::log1p(-uniform());
  return e > 0.0 ? e : 0x1.0p-54;
}

bool Rng::bit() noexcept {
  if (bits_left_ == 0) {
    bit_buffer_ = (*this)();
    bits_left_ = 64;
  }
  const bool b = (bit_buffer_ & 1U) != 0;
  bit_buffer_ >>= 1;
  --bits_left_;
  return b;
}

}  // namespace renewfluct
