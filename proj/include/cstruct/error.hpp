#pragma once

#include <stdexcept>
#include <string>

namespace cstruct {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input documents.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A well-formed input rejected by an operation's precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An enumeration or search exceeded its configured budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace cstruct
