#pragma once

#include <stdexcept>
#include <string>

namespace bures {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotPsdError : Error {
  explicit NotPsdError(const std::string& what) : Error(what) {}
};

struct NotPdError : Error {
  explicit NotPdError(const std::string& what) : Error(what) {}
};

struct DimensionMismatchError : Error {
  explicit DimensionMismatchError(const std::string& what) : Error(what) {}
};

struct ParamOutOfRangeError : Error {
  explicit ParamOutOfRangeError(const std::string& what) : Error(what) {}
};

struct NegativeDiscriminantError : Error {
  explicit NegativeDiscriminantError(const std::string& what) : Error(what) {}
};

// Violation of an internal reconstruction contract (e.g. the two routes to
// K(A) disagree). Signals numerical corruption, not bad user input.
struct NumericalError : Error {
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace bures
