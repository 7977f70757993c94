#include "renewfluct/dst.hpp"

#include <cmath>
#include <sstream>

#include "renewfluct/error.hpp"

namespace renewfluct {

BitString::BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

BitString BitString::parse(std::string_view text) {
  BitString out;
  out.bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw DomainError("bit string may only contain 0 and 1");
    out.bits_.push_back(c == '1' ? 1 : 0);
  }
  return out;
}

BitString BitString::prefix(std::size_t length) const {
  if (length > bits_.size()) throw DomainError("prefix longer than bit string");
  return BitString(std::vector<std::uint8_t>(bits_.begin(),
                                             bits_.begin() + static_cast<std::ptrdiff_t>(length)));
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(b != 0 ? '1' : '0');
  return s;
}

std::string_view to_string(Side side) noexcept {
  switch (side) {
    case Side::Root:
      return "root";
    case Side::Left:
      return "left";
    case Side::Right:
      return "right";
  }
  return "?";
}

// Returns the report for the empty slot reached by `bits`, or nullopt when
// the bits are exhausted first. `parent` receives the node owning the slot.
std::optional<InsertReport> Dst::locate(const BitString& bits, std::size_t& parent) const {
  if (nodes_.empty()) {
    parent = kNone;
    return InsertReport{0, BitString{}, std::nullopt, Side::Root};
  }
  std::size_t node = 0;
  for (std::size_t depth = 0;; ++depth) {
    if (depth >= bits.size()) return std::nullopt;
    const int dir = bits[depth] ? 1 : 0;
    const std::size_t next = nodes_[node].child[dir];
    if (next == kNone) {
      parent = node;
      return InsertReport{depth + 1, bits.prefix(depth + 1), nodes_[node].label,
                          dir == 1 ? Side::Right : Side::Left};
    }
    node = next;
  }
}

InsertReport Dst::insert(std::string label, const BitString& bits) {
  std::size_t parent = kNone;
  auto report = locate(bits, parent);
  if (!report) throw InsufficientBits(std::move(label), 0);
  if (parent != kNone) {
    nodes_[parent].child[report->side == Side::Right ? 1 : 0] = nodes_.size();
  }
  nodes_.push_back(Node{std::move(label), parent});
  return *report;
}

InsertReport Dst::probe(const BitString& bits) const {
  std::size_t parent = kNone;
  auto report = locate(bits, parent);
  if (!report) throw InsufficientBits("probe", 0);
  return *report;
}

std::vector<Dst::NodeView> Dst::nodes() const {
  std::vector<NodeView> out;
  out.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    std::vector<std::uint8_t> reversed;
    for (std::size_t cur = i; nodes_[cur].parent != kNone; cur = nodes_[cur].parent) {
      const auto& up = nodes_[nodes_[cur].parent];
      reversed.push_back(up.child[1] == cur ? 1 : 0);
    }
    out.push_back(NodeView{nodes_[i].label,
                           BitString(std::vector<std::uint8_t>(reversed.rbegin(), reversed.rend()))});
  }
  return out;
}

std::pair<Dst, std::vector<InsertReport>> build(std::span<const CorpusEntry> corpus) {
  Dst tree;
  std::vector<InsertReport> reports;
  reports.reserve(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    try {
      reports.push_back(tree.insert(corpus[i].label, corpus[i].bits));
    } catch (const InsufficientBits& e) {
      throw InsufficientBits(e.label(), i);
    }
  }
  return {std::move(tree), std::move(reports)};
}

BitString bits_from_unit_interval(double x, std::size_t length) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("x must lie in [0, 1)");
  if (length < 1) throw DomainError("bit length must be >= 1");
  BitString out;
  for (std::size_t i = 0; i < length; ++i) {
    x *= 2.0;  // exact in binary floating point
    const bool bit = x >= 1.0;
    out.push_back(bit);
    if (bit) x -= 1.0;
  }
  return out;
}

std::vector<CorpusEntry> knuth_corpus() {
  static constexpr const char* kBits[] = {"0110", "1011", "0011", "0010", "0100",
                                          "0111", "0011", "1011", "0001", "0100"};
  std::vector<CorpusEntry> corpus;
  for (std::size_t i = 0; i < std::size(kBits); ++i) {
    corpus.push_back(CorpusEntry{"x_" + std::to_string(i + 1), BitString::parse(kBits[i])});
  }
  return corpus;
}

std::vector<CorpusEntry> parse_corpus(std::istream& in) {
  std::vector<CorpusEntry> corpus;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string label;
    std::string bits;
    std::string extra;
    if (!(fields >> label >> bits)) throw CorpusParseError(number, "expected 'label bits'");
    if (fields >> extra) throw CorpusParseError(number, "trailing field '" + extra + "'");
    try {
      corpus.push_back(CorpusEntry{label, BitString::parse(bits)});
    } catch (const DomainError&) {
      throw CorpusParseError(number, "invalid bit string '" + bits + "'");
    }
  }
  return corpus;
}

namespace {

// Pointer-free DST over node indices; keys draw fresh fair bits on the way
// down, which is all the routing ever inspects.
class RandomDst {
 public:
  explicit RandomDst(std::size_t capacity) { child_.reserve(2 * capacity + 2); }

  void clear() { child_.clear(); }

  // Depth at which a key with random bits lands, or nullopt past the budget.
  template <typename NextBit>
  std::optional<std::size_t> insert(NextBit&& next_bit, std::size_t budget) {
    if (child_.empty()) {
      add_node();
      return 0;
    }
    std::size_t node = 0;
    for (std::size_t depth = 0; depth < budget; ++depth) {
      const std::size_t slot = 2 * node + (next_bit(depth) ? 1 : 0);
      if (child_[slot] == kNone) {
        child_[slot] = add_node();
        return depth + 1;
      }
      node = child_[slot];
    }
    return std::nullopt;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t add_node() {
    child_.push_back(kNone);
    child_.push_back(kNone);
    return child_.size() / 2 - 1;
  }

  std::vector<std::size_t> child_;
};

}  // namespace

InsertionDepthSample simulate_insertion_depth(std::int64_t n, std::size_t replicates,
                                              std::size_t bit_budget, std::uint64_t seed) {
  if (n < 0) throw DomainError("simulate_insertion_depth: n must be >= 0");
  if (replicates < 1) throw DomainError("simulate_insertion_depth: replicates must be >= 1");
  if (bit_budget < 1) throw DomainError("simulate_insertion_depth: bit budget must be >= 1");

  std::vector<std::int64_t> depths;
  depths.reserve(replicates);
  std::size_t insufficient = 0;
  RandomDst tree(static_cast<std::size_t>(n) + 1);
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(seed, r);
    auto fair = [&rng](std::size_t) { return rng.bit(); };
    tree.clear();
    bool ok = true;
    for (std::int64_t i = 0; i < n && ok; ++i) ok = tree.insert(fair, bit_budget).has_value();
    const auto depth = ok ? tree.insert(fair, bit_budget) : std::nullopt;
    if (!depth) {
      ++insufficient;
      continue;
    }
    depths.push_back(static_cast<std::int64_t>(*depth));
  }
  if (depths.empty()) throw DomainError("every replicate exceeded the bit budget");
  return InsertionDepthSample{IntPmf::empirical(depths), insufficient};
}

IntPmf simulate_probe_depth(std::int64_t n, std::size_t replicates, const BitString& theta,
                            std::uint64_t seed) {
  if (n < 0) throw DomainError("simulate_probe_depth: n must be >= 0");
  if (replicates < 1) throw DomainError("simulate_probe_depth: replicates must be >= 1");
  std::vector<std::int64_t> depths;
  depths.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    Rng rng(seed, r);
    Dst tree;
    for (std::int64_t i = 0; i < n; ++i) {
      // 64 fair bits per key; exhausting them has probability ~n^2 2^{-64}.
      BitString bits;
      for (int b = 0; b < 64; ++b) bits.push_back(rng.bit());
      tree.insert("", bits);
    }
    try {
      depths.push_back(static_cast<std::int64_t>(tree.probe(theta).depth));
    } catch (const InsufficientBits&) {
      throw DomainError("simulate_probe_depth: theta is too short");
    }
  }
  return IntPmf::empirical(depths);
}

}  // namespace renewfluct
