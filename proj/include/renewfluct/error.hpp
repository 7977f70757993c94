#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace renewfluct {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Operation requested for a lifetime family that has no exact engine for it.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A key ran out of bits before reaching an empty node of a digital search tree.
class InsufficientBits : public std::runtime_error {
 public:
  InsufficientBits(std::string label, std::size_t index)
      : std::runtime_error("insufficient bits for key '" + label + "'"),
        label_(std::move(label)),
        index_(index) {}

  const std::string& label() const noexcept { return label_; }
  /// Position of the failing key within the corpus being built (0 for single inserts).
  std::size_t index() const noexcept { return index_; }

 private:
  std::string label_;
  std::size_t index_;
};

}  // namespace renewfluct
