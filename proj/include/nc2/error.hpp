#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nc2 {

// Base for every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed graph description. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class CycleError : public Error {
 public:
  using Error::Error;
};

// Caller handed an operation inputs outside its contract.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A constructive procedure could not meet a postcondition that the theory
// guarantees. Always a defect signal.
class LemmaViolation : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the space exceeds its cap.
class SearchSpaceError : public Error {
 public:
  using Error::Error;
};

}  // namespace nc2
