#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace relinfo {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric argument is outside its mathematical domain
// (probability not in (0,1), count out of range, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An observed lod score is too close to zero for information ratios to be
// meaningful. Carries the offending variable ids when known.
class InstabilityError : public Error {
 public:
  explicit InstabilityError(const std::string& what) : Error(what) {}
  InstabilityError(const std::string& what, std::vector<std::string> ids)
      : Error(what), variable_ids(std::move(ids)) {}

  std::vector<std::string> variable_ids;
};

// The observed MLE sits on the boundary (x0 == 0 or x0 == n0) and the
// continuity correction is disabled.
class BoundaryMleError : public Error {
 public:
  using Error::Error;
};

// The lod weights of the overall-information combination sum to ~zero.
class EmptyWeightError : public Error {
 public:
  using Error::Error;
};

// An exhaustive enumeration would exceed its configured size bound.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Every simulated pair fell below the ratio floor.
class AllExcludedError : public Error {
 public:
  using Error::Error;
};

}  // namespace relinfo
