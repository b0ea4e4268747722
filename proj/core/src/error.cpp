#include "refaware/error.hpp"

namespace refaware {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyChangeSet: return "EMPTY_CHANGE_SET";
    case ErrorCode::kRevisionNotFound: return "REVISION_NOT_FOUND";
    case ErrorCode::kFileNotFound: return "FILE_NOT_FOUND";
    case ErrorCode::kAdapterMismatch: return "ADAPTER_MISMATCH";
    case ErrorCode::kKindMismatch: return "KIND_MISMATCH";
    case ErrorCode::kMissingBody: return "MISSING_BODY";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kValidationError: return "VALIDATION_ERROR";
    case ErrorCode::kGitFailure: return "GIT_FAILURE";
    case ErrorCode::kIoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

}  // namespace refaware
