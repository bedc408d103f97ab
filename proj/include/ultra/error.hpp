#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ultra {

enum class ErrorKind {
  invalid_argument,
  empty_input,
  io,
  not_found,
  format,
  version_mismatch,
  corrupt,
  truncated,
  dimension_mismatch,
  non_finite,
  provider,
};

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::empty_input: return "empty_input";
    case ErrorKind::io: return "io";
    case ErrorKind::not_found: return "not_found";
    case ErrorKind::format: return "format";
    case ErrorKind::version_mismatch: return "version_mismatch";
    case ErrorKind::corrupt: return "corrupt";
    case ErrorKind::truncated: return "truncated";
    case ErrorKind::dimension_mismatch: return "dimension_mismatch";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::provider: return "provider";
  }
  return "unknown";
}

/// Base exception for every failure raised by the library. The kind is what
/// callers branch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// An error raised inside a multi-stage job, tagged with the stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause)
      : Error(cause.kind(), "stage '" + stage + "': " + cause.what()),
        stage_(std::move(stage)) {}

  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) throw Error(kind, message);
}

}  // namespace ultra
