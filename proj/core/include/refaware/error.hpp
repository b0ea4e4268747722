#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace refaware {

enum class ErrorCode {
  kEmptyChangeSet,
  kRevisionNotFound,
  kFileNotFound,
  kAdapterMismatch,
  kKindMismatch,
  kMissingBody,
  kNotFound,
  kValidationError,
  kGitFailure,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code. `path`
// is the offending field path for validation errors and empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string path = {})
      : std::runtime_error(message), code_(code), path_(std::move(path)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorCode code_;
  std::string path_;
};

}  // namespace refaware
