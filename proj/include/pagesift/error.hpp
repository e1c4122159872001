#pragma once

#include <stdexcept>
#include <string>

namespace pagesift {

// Every failure the library reports derives from Error; the kind lets the CLI
// map failures to exit codes without string matching.
enum class ErrorKind {
  DepthExceeded,
  UnknownNodeId,
  InvalidViewport,
  NotACandidate,
  EmptyTraining,
  DegenerateLabels,
  SchemaMismatch,
  MalformedModel,
  InvalidConfig,
  MissingFile,
  MalformedLabels,
  TooFewPages,
  EmptyTruth,
  UnknownExtractor,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace pagesift
