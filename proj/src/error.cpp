#include "pagesift/error.hpp"

namespace pagesift {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::UnknownNodeId: return "UnknownNodeId";
    case ErrorKind::InvalidViewport: return "InvalidViewport";
    case ErrorKind::NotACandidate: return "NotACandidate";
    case ErrorKind::EmptyTraining: return "EmptyTraining";
    case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::MalformedModel: return "MalformedModel";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::MissingFile: return "MissingFile";
    case ErrorKind::MalformedLabels: return "MalformedLabels";
    case ErrorKind::TooFewPages: return "TooFewPages";
    case ErrorKind::EmptyTruth: return "EmptyTruth";
    case ErrorKind::UnknownExtractor: return "UnknownExtractor";
    case ErrorKind::Io: return "Io";
  }
  return "Error";
}

}  // namespace pagesift
