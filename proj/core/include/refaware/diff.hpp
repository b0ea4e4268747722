#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "refaware/detector.hpp"
#include "refaware/repo_reader.hpp"
#include "refaware/source_model.hpp"

namespace refaware {

// A run of changed lines with zero context. Coordinates are 1-based; a side
// with length zero carries the number of the line preceding the change (0 at
// the top of the file), as unified diffs do.
struct Hunk {
  int before_start = 0;
  int before_len = 0;
  int after_start = 0;
  int after_len = 0;
  std::vector<std::string> deleted_lines;
  std::vector<std::string> added_lines;

  friend bool operator==(const Hunk&, const Hunk&) = default;
};

enum class EditOp { kKeep, kDelete, kInsert };

struct Edit {
  EditOp op;
  int before_index;  // 0-based; meaningful for kKeep and kDelete
  int after_index;   // 0-based; meaningful for kKeep and kInsert
};

// Minimal line edit script (Myers). Inside a change block deletions come
// before insertions.
std::vector<Edit> edit_script(std::span<const std::string> before, std::span<const std::string> after);

std::vector<Hunk> line_diff(std::span<const std::string> before, std::span<const std::string> after);
std::vector<Hunk> line_diff(std::string_view before_text, std::string_view after_text);

// Rebuilds the after text from the before text; throws kValidationError if
// a hunk does not apply.
std::string apply_hunks(std::string_view before_text, std::span<const Hunk> hunks);

struct FileDiff {
  std::optional<std::string> path_before;
  std::optional<std::string> path_after;
  FileStatus status = FileStatus::kModified;
  bool binary = false;
  std::vector<Hunk> hunks;
};

FileDiff diff_file(const FileChange& change);

enum class RowStatus { kUnchanged, kModified, kAdded, kRemoved };

std::string to_string(RowStatus s);
RowStatus row_status_from_string(const std::string& s);

struct DiffRow {
  std::optional<std::string> left;
  std::optional<std::string> right;
  RowStatus status = RowStatus::kUnchanged;

  friend bool operator==(const DiffRow&, const DiffRow&) = default;
};

struct SignatureDelta {
  Signature before;
  Signature after;

  friend bool operator==(const SignatureDelta&, const SignatureDelta&) = default;
};

// The floating-window content for one refactoring. For EXTRACT_FUNCTION,
// `rows` compares the source function before and after the edit and
// `extracted_body` holds the extracted function's lines against the lines the
// source lost; the extracted function's declaration line and closing line
// appear as UNCHANGED frame rows. INLINE_FUNCTION is the mirror image.
struct AlignedDiff {
  std::vector<DiffRow> rows;
  std::optional<std::vector<DiffRow>> extracted_body;
  std::optional<SignatureDelta> signature_delta;

  friend bool operator==(const AlignedDiff&, const AlignedDiff&) = default;
};

// Side-by-side rows; within each change block k deletions and k insertions
// pair up positionally as MODIFIED rows, the excess stays REMOVED/ADDED.
std::vector<DiffRow> align_lines(std::span<const std::string> before, std::span<const std::string> after);

// Throws kMissingBody when the refactoring does not carry its element bodies.
AlignedDiff align_refactoring(const Refactoring& r);

struct ChurnCount {
  int added = 0;
  int deleted = 0;
  int total = 0;

  friend bool operator==(const ChurnCount&, const ChurnCount&) = default;
};

ChurnCount make_churn(int added, int deleted);
ChurnCount plain_churn(std::span<const Hunk> hunks);
// Deleted lines inside the refactoring's before-side element spans plus added
// lines inside its after-side spans.
ChurnCount plain_churn(std::span<const FileDiff> diffs, const Refactoring& r);
ChurnCount enhanced_churn(const AlignedDiff& aligned);

}  // namespace refaware
