#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "refaware/detector.hpp"
#include "refaware/diff.hpp"
#include "refaware/metrics.hpp"
#include "refaware/repo_reader.hpp"

namespace refaware {

inline constexpr int kSchemaVersion = 1;

struct RefactoringEntry {
  Refactoring refactoring;
  AlignedDiff aligned;
};

struct PairResult {
  RevisionPair pair;
  std::vector<FileDiff> files;
  std::vector<RefactoringEntry> refactorings;
  std::vector<DCCRecord> dcc;
  std::vector<MoveDistance> move_distances;
  TimingRecord timing;
};

struct AnalysisReport {
  int schema_version = kSchemaVersion;
  std::string repo_id;
  std::string change_set_id;
  std::string created_at;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"
  DetectorConfig detector_config;
  std::vector<PairResult> pairs;

  // Per-kind statistics over every pair; derived, never stored separately.
  Summary summary() const;
  const RefactoringEntry* find_refactoring(const std::string& id) const;
};

enum class EventKind { kRClickLeft, kRClickRight, kGoToSource, kWindowOpen, kWindowClose };

std::string to_string(EventKind k);
EventKind event_kind_from_string(const std::string& s);

struct ReviewEvent {
  std::string repo_id;
  std::string change_set_id;
  std::string refactoring_id;
  EventKind event = EventKind::kWindowOpen;
  std::string at;       // UTC timestamp, optional fractional seconds
  std::string session;  // client session id; may be empty

  friend bool operator==(const ReviewEvent&, const ReviewEvent&) = default;
};

// Milliseconds since the epoch for "YYYY-MM-DDTHH:MM:SS[.fff]Z"; nullopt if
// the text is not in that form.
std::optional<std::int64_t> parse_utc_millis(const std::string& ts);

// Conversions. The from_json functions throw Error(kValidationError) whose
// path() names the offending field, e.g. "pairs[0].refactorings[1].kind".
nlohmann::json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Refactoring& r);
nlohmann::json to_json(const AlignedDiff& d);
nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const ReviewEvent& e);
ReviewEvent event_from_json(const nlohmann::json& j);

// UTF-8, sorted keys, two-space indentation, LF line endings, trailing LF.
std::string canonical_dump(const nlohmann::json& j);
std::string canonical_dump(const AnalysisReport& report);

// Parses text as JSON; syntax errors become kValidationError.
nlohmann::json parse_json(const std::string& text);

}  // namespace refaware
