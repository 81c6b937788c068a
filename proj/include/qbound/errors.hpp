#pragma once

#include <stdexcept>
#include <string>

namespace qbound {

// Argument outside the mathematical domain of an operation (negative counts,
// p outside [0,1], k >= n without replacement, ...).
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller combined options that make no sense together (empty or mixed
// inequality sets, missing required flags).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed CSV, predicate or grid text. Carries a location when known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qbound

namespace qbound {

// A parsed predicate does not fit the table (unknown column, type mismatch,
// ordering comparison on text).
class BindError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qbound
