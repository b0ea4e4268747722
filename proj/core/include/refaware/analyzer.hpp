#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "refaware/detector.hpp"
#include "refaware/report.hpp"
#include "refaware/repo_reader.hpp"

namespace refaware {

struct AnalyzeRequest {
  std::filesystem::path repo_path;
  std::string base;                  // integration target revision
  std::string head;                  // last commit of the change set
  std::vector<std::string> commits;  // explicit commit list, oldest first; empty = base..head
  std::string repo_id;               // defaults to the repository directory name
  std::string change_set_id;         // defaults to "<base>..<head>"
  DetectorConfig config;
  bool parallel = true;
};

// Detection, alignment and metrics for one revision pair. Wall time covers
// detection and alignment, not reading the repository.
PairResult analyze_pair(const RevisionPair& pair, const std::vector<FileChange>& changes,
                        const DetectorConfig& cfg, int pair_index);

// enumerate_pairs -> detect -> align -> metrics for every pair. Pairs may run
// concurrently; results keep the enumeration order.
AnalysisReport analyze(const AnalyzeRequest& request);

}  // namespace refaware
