#pragma once

#include <stdexcept>
#include <string>

namespace cbvs {

/// A stated precondition of an operation does not hold for the given input.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested computation exceeds an enumeration or size cap.
class CapacityError : public std::runtime_error {
 public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed (factorization breakdown, non-finite result).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cbvs
