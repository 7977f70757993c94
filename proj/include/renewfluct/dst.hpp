#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "renewfluct/int_pmf.hpp"
#include "renewfluct/rng.hpp"

namespace renewfluct {

/// Finite 0/1 string; 0 moves left, 1 moves right.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits);
  /// Parses characters '0' and '1'; anything else is a DomainError.
  static BitString parse(std::string_view text);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void push_back(bool bit) { bits_.push_back(bit ? 1 : 0); }
  BitString prefix(std::size_t length) const;
  std::string to_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

enum class Side { Root, Left, Right };

std::string_view to_string(Side side) noexcept;

struct InsertReport {
  std::size_t depth;
  BitString path;  ///< bits consumed; depth == path.size()
  std::optional<std::string> parent_key;
  Side side;
};

/// Digital search tree. Keys are routed by their bits only and placed at the
/// first empty node along the path; key values are never compared, so equal
/// bit prefixes are legal.
class Dst {
 public:
  /// Places `label` at the first empty node along `bits`. Throws
  /// InsufficientBits, leaving the tree unchanged, if the bits run out first.
  InsertReport insert(std::string label, const BitString& bits);
  /// Where a key with these bits would land, without inserting it.
  InsertReport probe(const BitString& bits) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  struct NodeView {
    std::string_view label;
    BitString path;
  };
  /// Every stored key with the path leading to its node, in insertion order.
  std::vector<NodeView> nodes() const;

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  struct Node {
    std::string label;
    std::size_t parent;
    std::size_t child[2] = {kNone, kNone};
  };

  std::optional<InsertReport> locate(const BitString& bits, std::size_t& parent) const;

  std::vector<Node> nodes_;
};

struct CorpusEntry {
  std::string label;
  BitString bits;
};

/// Inserts the corpus left to right. InsufficientBits carries the index of
/// the failing entry.
std::pair<Dst, std::vector<InsertReport>> build(std::span<const CorpusEntry> corpus);

/// First `length` binary digits of x in [0, 1) by repeated doubling.
BitString bits_from_unit_interval(double x, std::size_t length);

/// Leading four bits of the fractional parts of sqrt2, sqrt3, sqrt5, sqrt10,
/// cbrt2, cbrt3, 2^{1/4}, log 2, log 3, log 10, labelled x_1..x_10.
std::vector<CorpusEntry> knuth_corpus();

/// Parses `label whitespace bitstring` records, one per line. Blank lines and
/// lines starting with '#' are skipped. Errors name the 1-based line.
class CorpusParseError : public std::runtime_error {
 public:
  CorpusParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::vector<CorpusEntry> parse_corpus(std::istream& in);

struct InsertionDepthSample {
  IntPmf pmf;                ///< over replicates that finished within the bit budget
  std::size_t insufficient;  ///< replicates that ran out of bits
};

/// Builds a DST from n keys with independent fair bits, inserts one more key
/// and records its depth; repeated `replicates` times. Replicate r draws from
/// stream r of `seed`.
InsertionDepthSample simulate_insertion_depth(std::int64_t n, std::size_t replicates,
                                              std::size_t bit_budget, std::uint64_t seed);

/// Depth of the first free node along the fixed path theta after n random
/// insertions, X_n(theta). theta must be longer than any depth reached.
IntPmf simulate_probe_depth(std::int64_t n, std::size_t replicates, const BitString& theta,
                            std::uint64_t seed);

}  // namespace renewfluct
