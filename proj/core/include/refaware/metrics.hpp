#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "refaware/detector.hpp"
#include "refaware/diff.hpp"

namespace refaware {

struct DCCRecord {
  std::string refactoring_id;
  ChurnCount plain;
  ChurnCount enhanced;

  friend bool operator==(const DCCRecord&, const DCCRecord&) = default;
};

struct MoveDistance {
  std::string refactoring_id;
  bool same_file = false;
  std::optional<int> distance_lines;  // present exactly for same-file moves

  friend bool operator==(const MoveDistance&, const MoveDistance&) = default;
};

struct TimingRecord {
  PairLabel pair_label;
  double wall_seconds = 0.0;

  friend bool operator==(const TimingRecord&, const TimingRecord&) = default;
};

// |after line - before line| for same-file moves. Throws kKindMismatch for
// anything that is not a move.
MoveDistance move_distance(const Refactoring& r);

DCCRecord dcc(const Refactoring& r, const AlignedDiff& aligned, std::span<const FileDiff> raw);
DCCRecord dcc(const Refactoring& r, std::span<const FileDiff> raw);

struct Distribution {
  std::size_t count = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double max = 0;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

// Median of an even-sized sample is the mean of the two central values;
// quartiles interpolate linearly between order statistics. Throws
// kValidationError on an empty sample.
double median(std::vector<double> values);
double quantile(std::vector<double> values, double q);
Distribution distribution(std::vector<double> values);

struct KindSummary {
  std::optional<Distribution> plain_dcc;  // absent when no record carried a DCC
  std::optional<Distribution> enhanced_dcc;
  std::optional<Distribution> move_distance;  // same-file moves only
};

struct Summary {
  std::map<RefactoringKind, KindSummary> by_kind;  // empty groups are omitted
};

struct RefactoringMetrics {
  RefactoringKind kind;
  std::optional<DCCRecord> dcc;
  std::optional<MoveDistance> move;
};

Summary summarize(std::span<const RefactoringMetrics> records);

}  // namespace refaware
