#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>

#include "grid.hpp"
#include "renewfluct/dst.hpp"
#include "renewfluct/error.hpp"
#include "renewfluct/lifetimes.hpp"
#include "renewfluct/limit_law.hpp"
#include "renewfluct/metrics.hpp"
#include "renewfluct/renewal.hpp"

namespace renewfluct::cli {
namespace {

using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
using Json = nlohmann::json;

constexpr std::int64_t kMaxDepthDistN = std::int64_t{1} << 22;

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + '"';
}

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_real(v);
        } else {
          return csv_field(v);
        }
      },
      cell);
}

Json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> Json {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::monostate>) {
          return nullptr;
        } else {
          return v;
        }
      },
      cell);
}

// Command identity echoed at the top of every output.
struct Meta {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;
  std::uint64_t seed = kDefaultSeed;

  std::string csv_line() const {
    std::string line = std::string("# renewfluct ") + kVersion + " command=" + command;
    for (const auto& [k, v] : flags) line += " " + k + "=" + v;
    return line + " seed=" + std::to_string(seed) + "\n";
  }

  Json json() const {
    Json f = Json::object();
    for (const auto& [k, v] : flags) f[k] = v;
    return Json{{"command", command}, {"flags", f}, {"seed", seed}, {"version", kVersion}};
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // CSV-only rows appended after the data (e.g. a summary line).
  std::vector<std::vector<Cell>> trailer;
  Json summary;  // JSON-only extra object, omitted when null
};

std::string render(const Meta& meta, const Table& table, Format format) {
  if (format == Format::Csv) {
    std::string out = meta.csv_line();
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (const auto* block : {&table.rows, &table.trailer}) {
      for (const auto& row : *block) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(row[i]);
        out += '\n';
      }
    }
    return out;
  }
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  Json doc = {{"meta", meta.json()}, {"rows", std::move(rows)}};
  if (!table.summary.is_null()) doc["summary"] = table.summary;
  return doc.dump(2) + "\n";
}

std::string render_report(const Meta& meta, const DistanceReport& report, Format format,
                          bool timing) {
  if (format == Format::Csv) return meta.csv_line() + report.to_csv(timing);
  Json doc = {{"meta", meta.json()}, {"rows", report.to_json(timing)}};
  return doc.dump(2) + "\n";
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw UsageError("--eta must lie in [0, 1]");
}

std::vector<std::int64_t> grid_or_usage(const std::string& text) {
  try {
    return parse_grid(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError("--n-grid '" + text + "': " + e.what());
  }
}

}  // namespace

CommandOutput cmd_limit_law(const LimitLawOptions& options) {
  require_eta(options.eta);
  if (options.x_hi < options.x_lo) throw UsageError("--x-range end precedes its start");
  const LimitLaw law(options.eta);
  Table table;
  table.columns = {"x", "cdf", "pmf", "tail"};
  for (std::int64_t x = options.x_lo; x <= options.x_hi; ++x) {
    table.rows.push_back({x, law.cdf(x), law.pmf(x), law.tail(x)});
  }
  Meta meta{"limit-law",
            {{"eta", format_real(options.eta)},
             {"x_range", std::to_string(options.x_lo) + ":" + std::to_string(options.x_hi)}}};
  return CommandOutput{render(meta, table, options.format), kSuccess, {}};
}

CommandOutput cmd_depth_dist(const DepthDistOptions& options) {
  if (options.n < 1 || options.n > kMaxDepthDistN) {
    throw UsageError("--n must lie in [1, 2^22] for the exact engine");
  }
  const auto centered = centered_count_distribution(options.n);
  const auto [lo, hi] = limit_comparison_window(centered.pmf, centered.eta);
  const double tv = tv_against_limit(centered.pmf, centered.eta);

  Table table;
  table.columns = {"j", "exact_pmf", "q_pmf", "abs_diff"};
  for (std::int64_t j = lo; j <= hi; ++j) {
    const double exact = centered.pmf.mass(j);
    const double limit = q_pmf(centered.eta, j);
    table.rows.push_back({j, exact, limit, std::fabs(exact - limit)});
  }
  table.trailer.push_back({std::string("tv"), Cell{}, Cell{}, tv});
  table.summary = {{"eta", centered.eta},
                   {"shift", centered.shift},
                   {"tv", tv},
                   {"dropped_mass", centered.dropped_mass}};
  Meta meta{"depth-dist", {{"n", std::to_string(options.n)}}};
  return CommandOutput{render(meta, table, options.format), kSuccess, {}};
}

CommandOutput cmd_dst_demo(const DstDemoOptions& options) {
  std::vector<CorpusEntry> corpus;
  if (options.corpus_path) {
    std::ifstream in(*options.corpus_path);
    if (!in) throw UsageError("cannot open corpus '" + *options.corpus_path + "'");
    try {
      corpus = parse_corpus(in);
    } catch (const CorpusParseError& e) {
      throw UsageError(std::string("corpus parse error, ") + e.what());
    }
  } else {
    corpus = knuth_corpus();
  }
  std::optional<BitString> probe;
  if (options.probe_bits) {
    try {
      probe = BitString::parse(*options.probe_bits);
    } catch (const DomainError&) {
      throw UsageError("--probe must be a string of 0 and 1");
    }
  }

  Table table;
  table.columns = {"label", "depth", "parent", "side", "path"};
  auto add = [&table](const std::string& label, const InsertReport& r) {
    table.rows.push_back({label, static_cast<std::int64_t>(r.depth),
                          r.parent_key ? Cell{*r.parent_key} : Cell{},
                          std::string(to_string(r.side)), r.path.to_string()});
  };
  try {
    auto [tree, reports] = build(corpus);
    for (std::size_t i = 0; i < reports.size(); ++i) add(corpus[i].label, reports[i]);
    if (probe) add("probe", tree.probe(*probe));
  } catch (const InsufficientBits& e) {
    throw DataError("insufficient bits for key '" + e.label() + "'");
  }

  Meta meta{"dst-demo",
            {{"corpus", options.corpus_path.value_or("builtin")},
             {"probe", options.probe_bits.value_or("")}}};
  return CommandOutput{render(meta, table, options.format), kSuccess, {}};
}

CommandOutput cmd_simulate(const SimulateOptions& options) {
  if (!(options.alpha > 1.0) || !std::isfinite(options.alpha)) {
    throw UsageError("--alpha must be > 1");
  }
  if (options.samples < 1) throw UsageError("--samples must be >= 1");
  if (!(options.base_mean > 0.0)) throw UsageError("--base-mean must be > 0");
  const std::string family_name =
      options.family.value_or(options.alpha == 2.0 ? "geometric" : "scaled");
  std::optional<LifetimeFamily> family;
  if (family_name == "geometric") {
    if (options.alpha != 2.0) throw UsageError("the geometric family has alpha = 2");
    family = LifetimeFamily::geometric_dst();
  } else if (family_name == "scaled") {
    family = LifetimeFamily::scaled_exponential(GrowthRate(options.alpha), options.base_mean);
  } else {
    throw UsageError("--family must be 'geometric' or 'scaled'");
  }
  const auto grid = grid_or_usage(options.grid);
  if (grid.front() < 1) throw UsageError("--n-grid horizons must be >= 1");

  const bool exact_limit = family->kind() == LifetimeKind::GeometricDst;
  const auto samples = static_cast<std::size_t>(options.samples);
  DistanceReport report;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = static_cast<double>(grid[i]);
    // Streams: block i << 32 for the counts, offset by 2^31 for limit draws.
    const std::uint64_t block = static_cast<std::uint64_t>(i) << 32;
    RenewalConfig config{*family, t, samples, options.seed, block};
    auto counts = simulate_count(config);

    const double log_t = std::log(t) / std::log(options.alpha);
    auto shift = static_cast<std::int64_t>(std::floor(log_t));
    double eta = log_t - static_cast<double>(shift);
    if (exact_limit) {
      shift = static_cast<std::int64_t>(std::bit_width(static_cast<std::uint64_t>(grid[i]))) - 1;
      eta = std::has_single_bit(static_cast<std::uint64_t>(grid[i]))
                ? 0.0
                : std::log2(t) - static_cast<double>(shift);
    }
    eta = std::clamp(eta, 0.0, 1.0);
    for (auto& c : counts) c -= shift;
    const auto empirical = IntPmf::empirical(counts);

    double tv = 0.0;
    if (exact_limit) {
      tv = tv_against_limit(empirical, eta);
    } else {
      Rng rng(options.seed, block + (std::uint64_t{1} << 31));
      std::vector<std::int64_t> draws(samples);
      for (auto& d : draws) d = sample_q(*family, eta, rng);
      tv = tv_distance(empirical, IntPmf::empirical(draws));
    }
    report.add(DistanceRow{grid[i], eta, tv, DistanceKind::TvSimulated, 0.0, std::nullopt});
  }

  Meta meta{"simulate",
            {{"alpha", format_real(options.alpha)},
             {"family", family_name},
             {"base_mean", format_real(options.base_mean)},
             {"n_grid", options.grid},
             {"samples", std::to_string(options.samples)}},
            options.seed};
  return CommandOutput{render_report(meta, report, options.format, false), kSuccess, {}};
}

CommandOutput cmd_converge(const ConvergeOptions& options) {
  const auto kind = parse_distance_kind(options.kind);
  if (!kind || *kind == DistanceKind::TvSimulated) {
    throw UsageError("--kind must be 'tv_limit' or 'ks_scaled'");
  }
  const std::string grid_text =
      options.grid.value_or(*kind == DistanceKind::TvLimit ? "2^4:2^18:x4" : "4:18:1");
  const auto grid = grid_or_usage(grid_text);
  if (*kind == DistanceKind::TvLimit && (grid.front() < 1 || grid.back() > kMaxDepthDistN)) {
    throw UsageError("tv_limit grid must lie in [1, 2^22]");
  }
  if (*kind == DistanceKind::KsScaled && (grid.front() < 1 || grid.back() > 22)) {
    throw UsageError("ks_scaled grid must lie in [1, 22]");
  }
  const auto report = rate_report(grid, *kind);
  Meta meta{"converge", {{"kind", options.kind}, {"n_grid", grid_text}}};

  CommandOutput out{render_report(meta, report, options.format, options.timing), kSuccess, {}};
  if (const auto violation = check_rate_proxy(report)) {
    const auto& row = report.rows()[violation->row];
    out.exit_code = kAssertionFailed;
    out.diagnostic = "rate proxy violated at n=" + std::to_string(row.n) + " (value " +
                     format_real(row.value) + "): " + violation->reason;
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Renewal counts under exponentially growing lifetimes: exact laws, limit laws, "
               "digital search trees and convergence-rate checks"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string format_name = "csv";
  std::optional<std::string> out_path;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format_name, "csv or json")->capture_default_str();
    sub->add_option("--out", out_path, "write to PATH instead of standard output");
  };

  LimitLawOptions limit;
  std::string x_range = "-3:12";
  auto* limit_cmd = app.add_subcommand("limit-law", "CDF, pmf and tail of Q_eta");
  limit_cmd->add_option("--eta", limit.eta, "shift in [0, 1]")->capture_default_str();
  limit_cmd->add_option("--x-range", x_range, "A:B")->capture_default_str();
  add_common(limit_cmd);

  DepthDistOptions depth;
  auto* depth_cmd = app.add_subcommand("depth-dist", "exact centered depth law beside its limit");
  depth_cmd->add_option("--n", depth.n, "number of stored keys")->capture_default_str();
  add_common(depth_cmd);

  DstDemoOptions demo;
  auto* demo_cmd = app.add_subcommand("dst-demo", "build a digital search tree from a corpus");
  demo_cmd->add_option("--corpus", demo.corpus_path, "file of 'label bits' lines");
  demo_cmd->add_option("--probe", demo.probe_bits, "bits of a key to probe without inserting");
  add_common(demo_cmd);

  SimulateOptions sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo centered renewal counts vs Q_eta");
  sim_cmd->add_option("--alpha", sim.alpha, "growth rate > 1")->capture_default_str();
  sim_cmd->add_option("--family", sim.family, "geometric or scaled");
  sim_cmd->add_option("--base-mean", sim.base_mean, "mean of the scaled exponential base")
      ->capture_default_str();
  sim_cmd->add_option("--n-grid", sim.grid, "horizons A:B:step")->capture_default_str();
  sim_cmd->add_option("--samples", sim.samples, "replicates per horizon")->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed, "64-bit seed")->capture_default_str();
  add_common(sim_cmd);

  ConvergeOptions conv;
  auto* conv_cmd = app.add_subcommand("converge", "rate report with monotone-proxy assertions");
  conv_cmd->add_option("--kind", conv.kind, "tv_limit or ks_scaled")->capture_default_str();
  conv_cmd->add_option("--n-grid", conv.grid, "A:B:step");
  conv_cmd->add_flag("--timing", conv.timing, "fill the ms column with wall time");
  add_common(conv_cmd);

  std::vector<std::string> argv_storage{"renewfluct"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Format format = Format::Csv;
    if (format_name == "json") {
      format = Format::Json;
    } else if (format_name != "csv") {
      throw UsageError("--format must be 'csv' or 'json'");
    }
    CommandOutput result;
    if (*limit_cmd) {
      const auto range = parse_grid(x_range);
      limit.x_lo = range.front();
      limit.x_hi = range.back();
      limit.format = format;
      result = cmd_limit_law(limit);
    } else if (*depth_cmd) {
      depth.format = format;
      result = cmd_depth_dist(depth);
    } else if (*demo_cmd) {
      demo.format = format;
      result = cmd_dst_demo(demo);
    } else if (*sim_cmd) {
      sim.format = format;
      result = cmd_simulate(sim);
    } else {
      conv.format = format;
      result = cmd_converge(conv);
    }

    if (out_path) {
      std::ofstream file(*out_path, std::ios::binary);
      if (!(file << result.text)) throw DataError("cannot write '" + *out_path + "'");
    } else {
      out << result.text;
    }
    if (!result.diagnostic.empty()) err << result.diagnostic << '\n';
    return result.exit_code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace renewfluct::cli
