#pragma once

#include <stdexcept>

namespace hamlat {

// Thrown when an input would exceed a documented enumeration or size cap.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hamlat
