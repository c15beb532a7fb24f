#pragma once

#include <stdexcept>
#include <string>

namespace wfax {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Decomposition failure, singular system, non-finite values.
struct NumericError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

/// A symbol that is not part of the alphabet in use.
struct AlphabetError : Error {
  using Error::Error;
};

/// Malformed JSON input (WFA files, weight files, datasets).
struct SchemaError : Error {
  using Error::Error;
};

}  // namespace wfax
