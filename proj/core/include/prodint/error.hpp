#pragma once

#include <stdexcept>
#include <string>

namespace prodint {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad ids, mismatched spaces or groups, malformed configs.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

// Arguments outside the domain of an operation (intervals, grids, ranges).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A group element left the chart domain 𝔘. Callers are expected to shrink
// steps or report the event as data.
class OutOfChartDomain : public Error {
 public:
  using Error::Error;
};

// A caller-side contract was broken (e.g. a C⁰ curve asked for derivatives).
class ContractError : public Error {
 public:
  using Error::Error;
};

}  // namespace prodint
