#pragma once

#include <stdexcept>
#include <string>

namespace relgauss {

/// Bad input: wrong shape, out-of-domain parameter, malformed scenario.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not meet its numerical contract (truncation leak,
/// singular matrix, disagreeing formulas).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The extraction protocol has nothing to act on: the initial state is not
/// entangled across the requested cut.
class ProtocolInapplicable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relgauss
