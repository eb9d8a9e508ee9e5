#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kscars {

/// Error categories. Each maps to a distinct CLI exit status.
enum class ErrorKind {
  Size,          // system size out of the supported range
  InvalidState,  // product-state pattern malformed or violating the constraint
  Configuration, // mismatched basis/model, missing data, bad option combination
  Precondition,  // operation called outside its documented domain
  Domain,        // mathematical domain (q <= 0, n out of range, ...)
  Convergence,   // adaptive propagator exhausted its retry budget
  Io,            // filesystem or parse failure
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace kscars
