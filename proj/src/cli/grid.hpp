#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace renewfluct::cli {

/// Parses `A:B:step` into A, A+step, ... up to B. A and B accept plain
/// integers or powers written `2^k`; a step written `xM` multiplies instead
/// of adding. `A:B` means step 1 and a lone `A` is a single point.
/// Throws std::invalid_argument on malformed or reversed ranges.
std::vector<std::int64_t> parse_grid(std::string_view text);

}  // namespace renewfluct::cli
