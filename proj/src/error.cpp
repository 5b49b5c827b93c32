#include "commensura/error.hpp"

namespace commensura {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "Syntax";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::MixedSymbolTables: return "MixedSymbolTables";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::NonpositiveLength: return "NonpositiveLength";
    case ErrorKind::DanglingEndpoint: return "DanglingEndpoint";
    case ErrorKind::Disconnected: return "Disconnected";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::NoCycle: return "NoCycle";
    case ErrorKind::EnumerationCapExceeded: return "EnumerationCapExceeded";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::InvalidTiling: return "InvalidTiling";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::Unsupported: return "Unsupported";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace commensura
