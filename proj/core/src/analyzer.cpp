#include "refaware/analyzer.hpp"

#include <chrono>
#include <future>

#include "refaware/error.hpp"
#include "refaware/text.hpp"

namespace refaware {

PairResult analyze_pair(const RevisionPair& pair, const std::vector<FileChange>& changes,
                        const DetectorConfig& cfg, int pair_index) {
  PairResult result;
  result.pair = pair;
  result.timing.pair_label = pair.label;

  const auto start = std::chrono::steady_clock::now();
  auto refactorings = detect(changes, cfg, pair.label);
  for (const auto& fc : changes) result.files.push_back(diff_file(fc));

  int n = 0;
  for (auto& r : refactorings) {
    r.id = "p" + std::to_string(pair_index) + "-r" + std::to_string(++n);
    AlignedDiff aligned = align_refactoring(r);
    result.dcc.push_back(dcc(r, aligned, result.files));
    if (is_move(r.kind)) result.move_distances.push_back(move_distance(r));
    result.refactorings.push_back({std::move(r), std::move(aligned)});
  }
  const auto stop = std::chrono::steady_clock::now();
  result.timing.wall_seconds = std::chrono::duration<double>(stop - start).count();
  return result;
}

AnalysisReport analyze(const AnalyzeRequest& request) {
  request.config.validate();
  GitRepository repo(request.repo_path);

  RevisionRef base = repo.resolve(request.base);
  std::vector<RevisionRef> commits;
  if (request.commits.empty()) {
    RevisionRef head = repo.resolve(request.head);
    commits = repo.commits_between(base, head);
  } else {
    for (const auto& c : request.commits) commits.push_back(repo.resolve(c));
  }
  const auto pairs = enumerate_pairs(base, commits);

  AnalysisReport report;
  report.repo_id = request.repo_id;
  if (report.repo_id.empty()) {
    auto canonical = std::filesystem::weakly_canonical(request.repo_path);
    report.repo_id = canonical.filename().string();
    if (report.repo_id.empty()) report.repo_id = canonical.parent_path().filename().string();
  }
  report.change_set_id = request.change_set_id;
  if (report.change_set_id.empty()) {
    std::string head_label = request.head.empty() ? commits.back().short_label : request.head;
    report.change_set_id = request.base + ".." + head_label;
  }
  report.created_at = text::utc_timestamp_now();
  report.detector_config = request.config;

  // Repository reads happen up front, outside the timed section.
  std::vector<std::vector<FileChange>> changes;
  changes.reserve(pairs.size());
  for (const auto& p : pairs) changes.push_back(repo.changed_files(p));

  report.pairs.resize(pairs.size());
  if (request.parallel && pairs.size() > 1) {
    std::vector<std::future<PairResult>> jobs;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      jobs.push_back(std::async(std::launch::async, analyze_pair, std::cref(pairs[i]), std::cref(changes[i]),
                                std::cref(request.config), static_cast<int>(i)));
    }
    for (std::size_t i = 0; i < jobs.size(); ++i) report.pairs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      report.pairs[i] = analyze_pair(pairs[i], changes[i], request.config, static_cast<int>(i));
    }
  }
  return report;
}

}  // namespace refaware
