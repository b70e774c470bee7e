#include "netboot/error.hpp"

namespace netboot {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::self_loop: return "self_loop";
    case ErrorCode::duplicate_edge: return "duplicate_edge";
    case ErrorCode::index_out_of_range: return "index_out_of_range";
    case ErrorCode::invalid_weight: return "invalid_weight";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::blocks_too_large: return "blocks_too_large";
    case ErrorCode::not_symmetric: return "not_symmetric";
    case ErrorCode::not_psd: return "not_psd";
    case ErrorCode::non_finite: return "non_finite";
    case ErrorCode::gamma_too_short: return "gamma_too_short";
    case ErrorCode::missing_replicates: return "missing_replicates";
    case ErrorCode::singular_system: return "singular_system";
    case ErrorCode::malformed_file: return "malformed_file";
    case ErrorCode::io_error: return "io_error";
    case ErrorCode::unknown_flag: return "unknown_flag";
    case ErrorCode::missing_seed: return "missing_seed";
  }
  return "unknown";
}

}  // namespace netboot
