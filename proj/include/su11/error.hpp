#pragma once

#include <stdexcept>
#include <string>

namespace su11 {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the inputs was violated (bad parameter, mismatched representation, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The truncated space is too small for the requested accuracy.
class TruncationError : public Error {
 public:
  using Error::Error;
};

/// Overflow, failed fit, non-monotone series tail and similar numerical failures.
class NumericError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace su11
