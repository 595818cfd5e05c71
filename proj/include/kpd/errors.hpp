#pragma once

#include <stdexcept>
#include <string>

namespace kpd {

// Thrown when a checked dimension product would exceed the 64-bit range.
struct OverflowError : std::overflow_error {
  explicit OverflowError(const std::string& what) : std::overflow_error(what) {}
};

// Thrown when a solver is handed a numerically zero vector.
struct ZeroVectorError : std::domain_error {
  explicit ZeroVectorError(const std::string& what) : std::domain_error(what) {}
};

// Thrown when the descent error functional stops being finite (step too large).
struct NonFiniteError : std::runtime_error {
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kpd
