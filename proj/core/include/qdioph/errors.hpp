#pragma once

#include <stdexcept>
#include <string>

namespace qdioph {

// Raised when exact integer arithmetic would leave the 64-bit range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace qdioph
