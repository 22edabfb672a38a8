#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace affkl {

/// Bad caller input: invalid generator index, rank mismatch, violated precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configured enumeration or search cap was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An invariant that should hold by construction was observed to fail.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed textual input. `position()` is the character offset of the
/// offending token, or npos when the fault is not tied to one token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + (position == npos ? std::string{}
                                                     : " (at position " + std::to_string(position) + ")")),
        position_(position) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace affkl
