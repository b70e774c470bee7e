#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace netboot {

/// Machine-readable failure categories. The CLI reports them verbatim.
enum class ErrorCode {
  invalid_argument,
  self_loop,
  duplicate_edge,
  index_out_of_range,
  invalid_weight,
  dimension_mismatch,
  blocks_too_large,
  not_symmetric,
  not_psd,
  non_finite,
  gamma_too_short,
  missing_replicates,
  singular_system,
  malformed_file,
  io_error,
  unknown_flag,
  missing_seed,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace netboot
