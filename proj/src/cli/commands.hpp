#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace renewfluct::cli {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 20070201;

enum ExitCode : int { kSuccess = 0, kAssertionFailed = 1, kUsage = 2, kDataError = 3 };

/// Bad flag values; exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unusable input data; exit code 3.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

/// Rendered command output; `diagnostic` goes to stderr.
struct CommandOutput {
  std::string text;
  int exit_code = kSuccess;
  std::string diagnostic;
};

struct LimitLawOptions {
  double eta = 0.0;
  std::int64_t x_lo = -3;
  std::int64_t x_hi = 12;
  Format format = Format::Csv;
};
CommandOutput cmd_limit_law(const LimitLawOptions& options);

struct DepthDistOptions {
  std::int64_t n = 1024;
  Format format = Format::Csv;
};
CommandOutput cmd_depth_dist(const DepthDistOptions& options);

struct DstDemoOptions {
  std::optional<std::string> corpus_path;  ///< builtin corpus when empty
  std::optional<std::string> probe_bits;
  Format format = Format::Csv;
};
CommandOutput cmd_dst_demo(const DstDemoOptions& options);

struct SimulateOptions {
  double alpha = 2.0;
  std::optional<std::string> family;  ///< "geometric" or "scaled"
  double base_mean = 1.0;
  std::string grid = "2^4:2^12:x4";
  std::int64_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  Format format = Format::Csv;
};
CommandOutput cmd_simulate(const SimulateOptions& options);

struct ConvergeOptions {
  std::string kind = "tv_limit";
  std::optional<std::string> grid;  ///< per-kind default when empty
  bool timing = false;
  Format format = Format::Csv;
};
CommandOutput cmd_converge(const ConvergeOptions& options);

/// Full command line, argv[0] excluded. Writes to `out` (or --out PATH) and
/// diagnostics to `err`; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace renewfluct::cli
