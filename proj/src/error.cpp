#include "sublink/error.hpp"

namespace sublink {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::empty_vocabulary: return "empty vocabulary";
    case ErrorKind::offset: return "offset error";
    case ErrorKind::configuration: return "configuration error";
    case ErrorKind::shape: return "shape error";
    case ErrorKind::infeasible_quota: return "infeasible quota";
    case ErrorKind::degenerate_batch: return "degenerate batch";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::unknown_entity: return "unknown entity";
    case ErrorKind::parse: return "parse error";
    case ErrorKind::alignment: return "alignment error";
    case ErrorKind::protocol: return "protocol error";
    case ErrorKind::io: return "i/o error";
  }
  return "error";
}

bool Error::is_input_error() const {
  switch (kind_) {
    case ErrorKind::shape:
    case ErrorKind::divergence:
    case ErrorKind::degenerate_batch:
      return false;
    default:
      return true;
  }
}

}  // namespace sublink
