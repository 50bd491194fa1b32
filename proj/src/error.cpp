#include "qap/error.hpp"

namespace qap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Validation: return "Validation";
    case ErrorKind::Singularity: return "Singularity";
    case ErrorKind::ZeroFrequency: return "ZeroFrequency";
    case ErrorKind::ZeroStiffness: return "ZeroStiffness";
    case ErrorKind::Resonance: return "Resonance";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::IncompleteGrid: return "IncompleteGrid";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::FDFailure: return "FDFailure";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace qap
