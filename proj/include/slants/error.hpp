#pragma once

#include <stdexcept>
#include <string>

namespace slants {

/// Failure categories. They map one-to-one onto the C API status codes.
enum class ErrorCode {
  invalid_argument = 1,
  dimension_mismatch,
  insufficient_data,
  degenerate_covariate,
  not_initialized,
  underdetermined,
  numerical_failure,
  io_error,
  format_error,
  not_converged,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace slants
