#include "grid.hpp"

#include <charconv>
#include <limits>
#include <stdexcept>
#include <string>

namespace renewfluct::cli {
namespace {

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_point(std::string_view text) {
  if (text.starts_with("2^")) {
    const auto exponent = parse_int(text.substr(2));
    if (exponent < 0 || exponent > 62) throw std::invalid_argument("exponent out of range");
    return std::int64_t{1} << exponent;
  }
  return parse_int(text);
}

}  // namespace

std::vector<std::int64_t> parse_grid(std::string_view text) {
  const auto first = text.find(':');
  const auto start = parse_point(text.substr(0, first));
  if (first == std::string_view::npos) return {start};

  const auto rest = text.substr(first + 1);
  const auto second = rest.find(':');
  const auto stop = parse_point(rest.substr(0, second));
  if (stop < start) throw std::invalid_argument("grid end precedes its start");

  std::string_view step_text = second == std::string_view::npos ? "1" : rest.substr(second + 1);
  const bool multiplicative = step_text.starts_with('x');
  const auto step = parse_int(multiplicative ? step_text.substr(1) : step_text);
  if (multiplicative ? step < 2 : step < 1) throw std::invalid_argument("grid step must advance");
  if (multiplicative && start < 1) throw std::invalid_argument("geometric grid must start at >= 1");

  std::vector<std::int64_t> grid;
  for (std::int64_t v = start; v <= stop;) {
    grid.push_back(v);
    if (multiplicative) {
      if (v > std::numeric_limits<std::int64_t>::max() / step) break;
      v *= step;
    } else {
      if (v > std::numeric_limits<std::int64_t>::max() - step) break;
      v += step;
    }
  }
  return grid;
}

}  // namespace renewfluct::cli
