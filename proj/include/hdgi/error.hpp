#pragma once

#include <stdexcept>
#include <string>

namespace hdgi {

enum class ErrorCode {
  invalid_param,
  alignment,
  unknown_preset,
  missing_exact,
  not_interface_edge,
  singular_local_block,
  not_positive_definite,
  no_convergence,
  not_nested,
  bad_sequence,
  asymmetric_matrix,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_param: return "InvalidParam";
    case ErrorCode::alignment: return "AlignmentError";
    case ErrorCode::unknown_preset: return "UnknownPreset";
    case ErrorCode::missing_exact: return "MissingExact";
    case ErrorCode::not_interface_edge: return "NotInterfaceEdge";
    case ErrorCode::singular_local_block: return "SingularLocalBlock";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::no_convergence: return "NoConvergence";
    case ErrorCode::not_nested: return "NotNested";
    case ErrorCode::bad_sequence: return "BadSequence";
    case ErrorCode::asymmetric_matrix: return "AsymmetricMatrix";
  }
  return "Error";
}

}  // namespace hdgi
