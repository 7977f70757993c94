#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "renewfluct/int_pmf.hpp"

namespace renewfluct {

/// Total variation distance, half the l1 distance of the mass functions.
double tv_distance(const IntPmf& p, const IntPmf& q);

/// One jump of a right-continuous step CDF: the CDF equals cdf_after on
/// [point, next point).
struct Jump {
  double point;
  double cdf_after;
};

/// sup_x |F_step(x) - F(x)| for a step CDF against a continuous CDF F.
/// Exact: the supremum is attained at a jump, from the left or the right.
double ks_discrete_vs_continuous(std::span<const Jump> jumps,
                                 const std::function<double(double)>& cdf);

/// Index window [lo, hi] holding the law's support and all but < 1e-14 of
/// Q_eta on each side.
std::pair<std::int64_t, std::int64_t> limit_comparison_window(const IntPmf& law, double eta);

/// TV distance between an integer law and Q_eta. The window covers the law's
/// support and is widened until Q_eta puts less than 1e-14 outside it; the
/// mass Q_eta places outside is added exactly.
double tv_against_limit(const IntPmf& law, double eta);

struct TvToLimit {
  double tv;
  double eta;
  double truncation_bound;  ///< mass dropped by the exact DP
};

/// d_TV(L(X_n - floor(log2 n)), Q_{log2 n mod 1}) for 1 <= n <= 2^22.
TvToLimit tv_to_limit(std::int64_t n);

struct GapCheck {
  double lhs;  ///< |P(N_t - k(t) = j) - Q_eta(t)({j})|
  double rhs;  ///< phi(k(t)+j) + phi(k(t)+j+1), truncation bounds included
};

/// Both sides of the pointwise bound relating the centered count law to its
/// limit through the KS distances phi(m) = d_KS(2^{-m} S_m, S).
GapCheck pmf_gap_bound_check(std::int64_t t, std::int64_t j);

enum class DistanceKind { TvLimit, KsScaled, TvSimulated };

std::string_view to_string(DistanceKind kind) noexcept;
std::optional<DistanceKind> parse_distance_kind(std::string_view text) noexcept;

struct DistanceRow {
  std::int64_t n;
  double eta;
  double value;
  DistanceKind kind;
  double trunc_bound;
  std::optional<double> ms;
};

/// Rows of (n, eta, distance) with n strictly increasing.
class DistanceReport {
 public:
  void add(DistanceRow row);
  std::span<const DistanceRow> rows() const noexcept { return rows_; }
  bool empty() const noexcept { return rows_.empty(); }
  std::size_t size() const noexcept { return rows_.size(); }

  /// Header `n,eta,kind,value,trunc_bound,ms`; ms is left empty unless
  /// `with_timing`, keeping the output a pure function of the inputs.
  std::string to_csv(bool with_timing) const;
  nlohmann::json to_json(bool with_timing) const;

 private:
  std::vector<DistanceRow> rows_;
};

/// One row per grid point. TvLimit uses tv_to_limit; KsScaled uses
/// ks_scaled_sum_exact with the default cap.
DistanceReport rate_report(std::span<const std::int64_t> grid, DistanceKind kind);

/// First row breaking the finite-n rate proxies:
///  TvLimit  - values strictly decreasing, and value * n^0.9 decreasing once n >= 2^8;
///  KsScaled - values strictly decreasing, and value * 2^n / n never above the first row's.
struct ProxyViolation {
  std::size_t row;
  std::string reason;
};
std::optional<ProxyViolation> check_rate_proxy(const DistanceReport& report);

/// Formats with 17 significant digits, the shortest width that always round-trips.
std::string format_real(double value);

}  // namespace renewfluct
