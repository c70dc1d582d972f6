#pragma once

#include <stdexcept>
#include <string>

namespace modekit {

// Bad input from the caller: out-of-range parameters, dimension mismatches,
// empty estimators, malformed data files.
class InvalidInput : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed request the library does not support (e.g. confidence
// ellipsoids for d > 1).
class Unsupported : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// A numerical routine failed to deliver a trustworthy value.
class NumericFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace modekit
