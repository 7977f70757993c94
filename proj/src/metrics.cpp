#include "renewfluct/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "renewfluct/error.hpp"
#include "renewfluct/limit_law.hpp"
#include "renewfluct/renewal.hpp"

namespace renewfluct {
namespace {

constexpr double kLimitTailCutoff = 1e-14;
constexpr std::int64_t kMaxTvSteps = std::int64_t{1} << 22;

}  // namespace

double tv_distance(const IntPmf& p, const IntPmf& q) {
  const std::int64_t lo = std::min(p.min_support(), q.min_support());
  const std::int64_t hi = std::max(p.max_support(), q.max_support());
  long double sum = 0.0L;
  for (std::int64_t j = lo; j <= hi; ++j) sum += std::fabs(p.mass(j) - q.mass(j));
  return std::clamp(static_cast<double>(sum / 2.0L), 0.0, 1.0);
}

double ks_discrete_vs_continuous(std::span<const Jump> jumps,
                                 const std::function<double(double)>& cdf) {
  double previous_cdf = 0.0;
  double previous_point = -INFINITY;
  double sup = 0.0;
  for (const auto& jump : jumps) {
    if (!(jump.point > previous_point)) throw DomainError("jump points must be strictly increasing");
    if (jump.cdf_after < previous_cdf || jump.cdf_after > 1.0 + 1e-12) {
      throw DomainError("step CDF must be nondecreasing and at most 1");
    }
    const double f = cdf(jump.point);
    sup = std::max({sup, std::fabs(jump.cdf_after - f), std::fabs(previous_cdf - f)});
    previous_cdf = jump.cdf_after;
    previous_point = jump.point;
  }
  // Past the last jump F climbs to 1 while the step stays put.
  return std::max(sup, std::fabs(1.0 - previous_cdf));
}

std::pair<std::int64_t, std::int64_t> limit_comparison_window(const IntPmf& law, double eta) {
  std::int64_t lo = law.min_support();
  std::int64_t hi = law.max_support();
  while (q_cdf(eta, lo - 1) > kLimitTailCutoff) --lo;
  while (q_tail(eta, hi + 1) > kLimitTailCutoff) ++hi;
  return {lo, hi};
}

double tv_against_limit(const IntPmf& law, double eta) {
  const auto [lo, hi] = limit_comparison_window(law, eta);
  long double sum = 0.0L;
  for (std::int64_t j = lo; j <= hi; ++j) sum += std::fabs(law.mass(j) - q_pmf(eta, j));
  sum += q_cdf(eta, lo - 1) + q_tail(eta, hi + 1);
  return std::clamp(static_cast<double>(sum / 2.0L), 0.0, 1.0);
}

TvToLimit tv_to_limit(std::int64_t n) {
  if (n < 1 || n > kMaxTvSteps) throw DomainError("tv_to_limit: n must lie in [1, 2^22]");
  const auto centered = centered_count_distribution(n);
  return TvToLimit{tv_against_limit(centered.pmf, centered.eta), centered.eta,
                   centered.dropped_mass};
}

GapCheck pmf_gap_bound_check(std::int64_t t, std::int64_t j) {
  if (t < 1 || t > kMaxExactSteps) throw DomainError("pmf_gap_bound_check: t outside the exact range");
  const auto centered = centered_count_distribution(t);
  const std::int64_t m = centered.shift + j;
  if (m < 1 || m + 1 > 22) {
    throw DomainError("pmf_gap_bound_check: k(t)+j must lie in [1, 21]");
  }
  const double lhs = std::fabs(centered.pmf.mass(j) - q_pmf(centered.eta, j));
  const auto phi = [](std::int64_t index) {
    const auto ks = ks_scaled_sum_exact(static_cast<int>(index));
    return ks.ks + ks.truncation_bound;
  };
  return GapCheck{lhs, phi(m) + phi(m + 1) + centered.dropped_mass};
}

std::string_view to_string(DistanceKind kind) noexcept {
  switch (kind) {
    case DistanceKind::TvLimit:
      return "tv_limit";
    case DistanceKind::KsScaled:
      return "ks_scaled";
    case DistanceKind::TvSimulated:
      return "tv_simulated";
  }
  return "?";
}

std::optional<DistanceKind> parse_distance_kind(std::string_view text) noexcept {
  for (auto kind : {DistanceKind::TvLimit, DistanceKind::KsScaled, DistanceKind::TvSimulated}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

void DistanceReport::add(DistanceRow row) {
  if (!rows_.empty() && row.n <= rows_.back().n) {
    throw DomainError("report rows must have strictly increasing n");
  }
  if (!(row.value >= 0.0 && row.value <= 1.0)) throw DomainError("distance outside [0, 1]");
  rows_.push_back(row);
}

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string DistanceReport::to_csv(bool with_timing) const {
  std::ostringstream out;
  out << "n,eta,kind,value,trunc_bound,ms\n";
  for (const auto& row : rows_) {
    out << row.n << ',' << format_real(row.eta) << ',' << to_string(row.kind) << ','
        << format_real(row.value) << ',' << format_real(row.trunc_bound) << ',';
    if (with_timing && row.ms) out << format_real(*row.ms);
    out << '\n';
  }
  return out.str();
}

nlohmann::json DistanceReport::to_json(bool with_timing) const {
  auto rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json j = {{"n", row.n},
                        {"eta", row.eta},
                        {"kind", to_string(row.kind)},
                        {"value", row.value},
                        {"trunc_bound", row.trunc_bound}};
    j["ms"] = (with_timing && row.ms) ? nlohmann::json(*row.ms) : nlohmann::json(nullptr);
    rows.push_back(std::move(j));
  }
  return rows;
}

DistanceReport rate_report(std::span<const std::int64_t> grid, DistanceKind kind) {
  if (kind == DistanceKind::TvSimulated) {
    throw DomainError("rate_report covers the exact kinds only");
  }
  if (std::adjacent_find(grid.begin(), grid.end(), std::greater_equal<>()) != grid.end()) {
    throw DomainError("rate grid must be strictly increasing");
  }
  DistanceReport report;
  for (std::int64_t n : grid) {
    const auto start = std::chrono::steady_clock::now();
    DistanceRow row{n, 0.0, 0.0, kind, 0.0, std::nullopt};
    if (kind == DistanceKind::TvLimit) {
      const auto r = tv_to_limit(n);
      row.eta = r.eta;
      row.value = r.tv;
      row.trunc_bound = r.truncation_bound;
    } else {
      if (n < 1 || n > 22) throw DomainError("ks_scaled grid entries must lie in [1, 22]");
      const auto r = ks_scaled_sum_exact(static_cast<int>(n));
      row.value = r.ks;
      row.trunc_bound = r.truncation_bound;
    }
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
    report.add(row);
  }
  return report;
}

std::optional<ProxyViolation> check_rate_proxy(const DistanceReport& report) {
  const auto rows = report.rows();
  if (rows.empty()) return std::nullopt;
  const auto scaled = [](const DistanceRow& row) {
    const double n = static_cast<double>(row.n);
    if (row.kind == DistanceKind::KsScaled) return row.value * std::ldexp(1.0, static_cast<int>(row.n)) / n;
    return row.value * std::pow(n, 0.9);
  };
  const double first_scaled = scaled(rows.front());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& prev = rows[i - 1];
    const auto& row = rows[i];
    if (!(row.value < prev.value)) {
      return ProxyViolation{i, "distance not strictly decreasing"};
    }
    if (row.kind == DistanceKind::TvLimit && prev.n >= 256 && !(scaled(row) < scaled(prev))) {
      return ProxyViolation{i, "tv * n^0.9 not decreasing"};
    }
    if (row.kind == DistanceKind::KsScaled && scaled(row) > first_scaled) {
      return ProxyViolation{i, "ks * 2^n / n exceeds the first row"};
    }
  }
  return std::nullopt;
}

}  // namespace renewfluct
