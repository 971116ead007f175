#pragma once

#include <stdexcept>
#include <string>

namespace causevo {

/// Base class of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, inconsistent grids, events off their slice.
class InputError : public Error {
 public:
  using Error::Error;
};

/// A precondition of an operation does not hold for otherwise valid data
/// (p not causally before q, t off-grid, etc.).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace causevo
