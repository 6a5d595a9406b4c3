#pragma once

#include <stdexcept>
#include <string>

namespace bitalloc {

/// Argument or invariant violation on input data.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Bits requested on a subchannel that can never deliver them (p_n = 1).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No allocation can satisfy the constraints (e.g. every subchannel is in
/// permanent outage).
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A required per-subchannel exponent exceeds the cap (rate demand too high
/// for double precision energies).
class RateOverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// An iteration guard tripped; indicates a logic error, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed file contents. `line()` is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace bitalloc
