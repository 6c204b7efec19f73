#pragma once

#include <stdexcept>
#include <string>

namespace driftforge {

// Base class for all recoverable failures raised by the toolkit: bad input
// files, invalid configurations, contract violations on public operations.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace driftforge
