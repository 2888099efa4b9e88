#pragma once

#include <stdexcept>
#include <string>

namespace sublink {

enum class ErrorKind {
  empty_vocabulary,
  offset,
  configuration,
  shape,
  infeasible_quota,
  degenerate_batch,
  divergence,
  unknown_entity,
  parse,
  alignment,
  protocol,
  io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; the kind drives CLI exit codes and
// HTTP status mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

  // True for problems caused by bad input or configuration rather than by
  // the pipeline itself.
  bool is_input_error() const;

 private:
  ErrorKind kind_;
};

}  // namespace sublink
