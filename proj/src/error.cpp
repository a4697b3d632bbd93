#include "angio/error.hpp"

namespace angio {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::NoPositiveSteadyState: return "NoPositiveSteadyState";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NoDensity: return "NoDensity";
    case ErrorKind::PoleError: return "PoleError";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ConditionFailure: return "ConditionFailure";
    case ErrorKind::OnAxisZero: return "OnAxisZero";
    case ErrorKind::NonConvergent: return "NonConvergent";
    case ErrorKind::ContinuationStall: return "ContinuationStall";
    case ErrorKind::InconclusiveSign: return "InconclusiveSign";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

bool is_usage_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::NoPositiveSteadyState:
    case ErrorKind::Unsupported:
    case ErrorKind::ConfigError:
    case ErrorKind::DegenerateInput:
      return true;
    default:
      return false;
  }
}

}  // namespace angio
