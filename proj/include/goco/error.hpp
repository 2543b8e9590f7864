#pragma once

#include <stdexcept>
#include <string>

namespace goco {

enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch = 2,
  config = 3,
  unsupported = 4,
  numeric = 5,
  io = 6,
  internal = 7,
};

/// Single exception type thrown by the core; the code maps 1:1 onto the C API status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace goco
