#include "refaware/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "refaware/error.hpp"

namespace refaware {

MoveDistance move_distance(const Refactoring& r) {
  if (!is_move(r.kind)) {
    throw Error(ErrorCode::kKindMismatch, "move_distance on " + to_string(r.kind));
  }
  MoveDistance md;
  md.refactoring_id = r.id;
  md.same_file = r.before_anchor.file_path == r.after_anchor.file_path;
  if (md.same_file) md.distance_lines = std::abs(r.after_anchor.line - r.before_anchor.line);
  return md;
}

DCCRecord dcc(const Refactoring& r, const AlignedDiff& aligned, std::span<const FileDiff> raw) {
  return {r.id, plain_churn(raw, r), enhanced_churn(aligned)};
}

DCCRecord dcc(const Refactoring& r, std::span<const FileDiff> raw) {
  return dcc(r, align_refactoring(r), raw);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kValidationError, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  double pos = q * static_cast<double>(values.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = static_cast<std::size_t>(std::ceil(pos));
  double frac = pos - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

Distribution distribution(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::kValidationError, "distribution of an empty sample");
  std::sort(values.begin(), values.end());
  return {values.size(),           values.front(),          quantile(values, 0.25),
          quantile(values, 0.5),   quantile(values, 0.75),  values.back()};
}

Summary summarize(std::span<const RefactoringMetrics> records) {
  struct Samples {
    std::vector<double> plain, enhanced, distance;
  };
  std::map<RefactoringKind, Samples> groups;
  for (const auto& rec : records) {
    auto& g = groups[rec.kind];
    if (rec.dcc) {
      g.plain.push_back(rec.dcc->plain.total);
      g.enhanced.push_back(rec.dcc->enhanced.total);
    }
    if (rec.move && rec.move->distance_lines) g.distance.push_back(*rec.move->distance_lines);
  }
  Summary s;
  for (auto& [kind, g] : groups) {
    if (g.plain.empty() && g.distance.empty()) continue;
    KindSummary ks;
    if (!g.plain.empty()) {
      ks.plain_dcc = distribution(std::move(g.plain));
      ks.enhanced_dcc = distribution(std::move(g.enhanced));
    }
    if (!g.distance.empty()) ks.move_distance = distribution(std::move(g.distance));
    s.by_kind.emplace(kind, ks);
  }
  return s;
}

}  // namespace refaware
