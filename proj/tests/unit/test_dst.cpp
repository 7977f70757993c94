#include <doctest.h>

#include <cmath>
#include <sstream>

#include "renewfluct/dst.hpp"
#include "renewfluct/error.hpp"
#include "renewfluct/metrics.hpp"
#include "renewfluct/renewal.hpp"

using namespace renewfluct;

namespace {

BitString bits(const char* s) { return BitString::parse(s); }

double frac(double x) { return x - std::floor(x); }

}  // namespace

TEST_CASE("bit strings") {
  const auto b = bits("0110");
  CHECK(b.size() == 4);
  CHECK_FALSE(b[0]);
  CHECK(b[1]);
  CHECK(b.prefix(2) == bits("01"));
  CHECK(b.to_string() == "0110");
  CHECK(BitString::parse("").empty());
  CHECK_THROWS_AS(BitString::parse("012"), DomainError);
}

TEST_CASE("insert places keys at the first free node") {
  Dst tree;
  const auto root = tree.insert("a", bits("0101"));
  CHECK(root.depth == 0);
  CHECK(root.side == Side::Root);
  CHECK_FALSE(root.parent_key.has_value());

  const auto right = tree.insert("b", bits("1"));
  CHECK(right.depth == 1);
  CHECK(right.side == Side::Right);
  CHECK(right.parent_key == "a");
  CHECK(right.path == bits("1"));

  // Runs out of bits at the occupied right child.
  CHECK_THROWS_AS(tree.insert("c", bits("1")), InsufficientBits);
  CHECK(tree.size() == 2);
  CHECK(tree.insert("c", bits("10")).depth == 2);
}

TEST_CASE("knuth corpus builds the expected tree") {
  const auto corpus = knuth_corpus();
  REQUIRE(corpus.size() == 10);
  for (const auto& e : corpus) CHECK(e.bits.size() == 4);
  CHECK(corpus[3].bits == bits("0010"));
  CHECK(corpus[8].bits == bits("0001"));

  // Recompute the bits from the constants they come from.
  const double sources[10] = {std::sqrt(2.0), std::sqrt(3.0), std::sqrt(5.0), std::sqrt(10.0),
                              std::cbrt(2.0), std::cbrt(3.0), std::pow(2.0, 0.25),
                              std::log(2.0),  std::log(3.0),  std::log(10.0)};
  for (int i = 0; i < 10; ++i) {
    CHECK(corpus[i].bits == bits_from_unit_interval(frac(sources[i]), 4));
    CHECK(corpus[i].label == "x_" + std::to_string(i + 1));
  }

  auto [tree, reports] = build(corpus);
  const std::size_t want[10] = {0, 1, 1, 2, 2, 3, 3, 2, 3, 3};
  REQUIRE(reports.size() == 10);
  for (int i = 0; i < 10; ++i) {
    CHECK(reports[i].depth == want[i]);
    CHECK(reports[i].path.size() == reports[i].depth);
    CHECK(reports[i].path == corpus[i].bits.prefix(reports[i].depth));
  }
  CHECK(tree.size() == 10);

  const auto probe = tree.probe(bits("011100"));
  CHECK(probe.depth == 4);
  CHECK(probe.parent_key == "x_6");
  CHECK(probe.side == Side::Right);
  CHECK(tree.size() == 10);

  const auto inserted = tree.insert("x_11", bits("011100"));
  CHECK(inserted.depth == 4);
  CHECK(inserted.parent_key == "x_6");
}

TEST_CASE("prefix property of stored keys") {
  const auto corpus = knuth_corpus();
  const auto [tree, reports] = build(corpus);
  const auto nodes = tree.nodes();
  REQUIRE(nodes.size() == corpus.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(nodes[i].label == corpus[i].label);
    CHECK(nodes[i].path == corpus[i].bits.prefix(nodes[i].path.size()));
  }
}

TEST_CASE("unit interval bits") {
  CHECK(bits_from_unit_interval(0.5, 3) == bits("100"));
  CHECK(bits_from_unit_interval(frac(std::sqrt(2.0)), 4) == bits("0110"));
  CHECK(bits_from_unit_interval(frac(1.0 / std::log(2.0)), 6) == bits("011100"));
  CHECK_THROWS_AS(bits_from_unit_interval(1.0, 3), DomainError);
}

TEST_CASE("build edge cases") {
  const auto [tree, reports] = build(std::vector<CorpusEntry>{});
  CHECK(tree.empty());
  CHECK(reports.empty());

  std::vector<CorpusEntry> same;
  for (int i = 0; i < 6; ++i) same.push_back({"k" + std::to_string(i), bits("0101")});
  try {
    build(same);
    FAIL("expected InsufficientBits");
  } catch (const InsufficientBits& e) {
    CHECK(e.index() == 5);
    CHECK(e.label() == "k5");
  }
  same.pop_back();
  const auto [chain, chain_reports] = build(same);
  for (std::size_t i = 0; i < chain_reports.size(); ++i) CHECK(chain_reports[i].depth == i);
}

TEST_CASE("corpus parsing") {
  std::istringstream good("# comment\n\na 0110\n  b\t1011  \n");
  const auto corpus = parse_corpus(good);
  REQUIRE(corpus.size() == 2);
  CHECK(corpus[1].label == "b");
  CHECK(corpus[1].bits == bits("1011"));

  std::istringstream bad("a 0110\nb 10x1\n");
  try {
    parse_corpus(bad);
    FAIL("expected CorpusParseError");
  } catch (const CorpusParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream lonely("a\n");
  CHECK_THROWS_AS(parse_corpus(lonely), CorpusParseError);
  std::istringstream empty("");
  CHECK(parse_corpus(empty).empty());
}

TEST_CASE("random insertion depth follows the chain") {
  const auto zero = simulate_insertion_depth(0, 100, 64, 1);
  CHECK(zero.pmf.mass(0) == 1.0);
  const auto one = simulate_insertion_depth(1, 100, 64, 1);
  CHECK(one.pmf.mass(1) == 1.0);

  constexpr std::size_t kReps = 100000;
  const auto sim = simulate_insertion_depth(100, kReps, 256, 2007);
  CHECK(sim.insufficient == 0);
  const auto exact = depth_distribution_exact(100).pmf;
  for (std::int64_t j = exact.min_support(); j <= exact.max_support(); ++j) {
    const double p = exact.mass(j);
    const double se = std::sqrt(p * (1.0 - p) / kReps);
    CHECK(std::fabs(sim.pmf.mass(j) - p) <= 4.0 * se + 1e-12);
  }
  CHECK(sim.pmf.max_support() <= exact.max_support());
}

TEST_CASE("probe depth does not depend on the probed path") {
  constexpr std::size_t kReps = 50000;
  const auto zeros = simulate_probe_depth(50, kReps, BitString(std::vector<std::uint8_t>(60, 0)), 4);
  const auto mixed = simulate_probe_depth(50, kReps, bits_from_unit_interval(frac(M_PI), 60), 4);
  const auto exact = depth_distribution_exact(50).pmf;
  // Each empirical law is within sampling noise of the chain, hence of each other.
  const double noise = 4.0 * std::sqrt(exact.size() / (4.0 * kReps));
  CHECK(tv_distance(zeros, mixed) <= 2.0 * noise);
  CHECK(tv_distance(zeros, exact) <= noise);
  CHECK(tv_distance(mixed, exact) <= noise);
}
