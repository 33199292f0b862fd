#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace msql {

enum class ErrorCode {
  LexError,
  ParseError,
  DuplicateName,
  UnknownObject,
  ModelMismatch,
  AlreadyInitialized,
  SchemeInvalid,
  NotInitialized,
  ConformanceError,
  DuplicatePrimaryKey,
  DanglingEdge,
  UnknownScheme,
  StaleRef,
  UnresolvableObject,
  UnresolvableAttribute,
  AmbiguousAttribute,
  UnknownFilter,
  DuplicateFilterName,
  ReservedName,
  CrossObjectPredicateInSelect,
  ShapeMismatch,
  TransferIllegal,
  NotEmpty,
  IoError,
  Unsupported,
};

const char* error_code_name(ErrorCode code);

/// Source position, 1-based. line == 0 means "no position".
struct SourcePos {
  int line = 0;
  int column = 0;
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code),
        message_(std::move(message)) {}

  Error(ErrorCode code, SourcePos pos, std::string message)
      : std::runtime_error(std::string(error_code_name(code)) + " at " +
                           std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                           message),
        code_(code),
        pos_(pos),
        message_(std::move(message)) {}

  ErrorCode code() const { return code_; }
  const SourcePos& pos() const { return pos_; }
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  SourcePos pos_{};
  std::string message_;
};

/// One scheme/instance validation failure. `path` is a dotted location such
/// as "keyword[2].kid"; empty for whole-object findings.
struct Violation {
  std::string path;
  std::string message;

  bool operator==(const Violation&) const = default;
};

std::string violations_to_string(const std::vector<Violation>& violations);

}  // namespace msql
