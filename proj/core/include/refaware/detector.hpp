#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "refaware/repo_reader.hpp"
#include "refaware/source_model.hpp"

namespace refaware {

enum class RefactoringKind {
  kMoveFunction,
  kMoveAndRenameFunction,
  kMoveType,
  kMoveFile,
  kExtractFunction,
  kInlineFunction,
  kRenameFunction,
  kRenameType,
  kChangeSignature,
  kPullUp,
  kPushDown,
};

std::string to_string(RefactoringKind kind);  // "MOVE_FUNCTION"
RefactoringKind refactoring_kind_from_string(const std::string& s);
std::string display_name(RefactoringKind kind);  // "Move Function"
bool is_move(RefactoringKind kind);

struct DetectorConfig {
  double tau_match = 0.5;
  double tau_extract = 0.6;
  int min_extract_tokens = 8;
  double idf_smoothing = 1.0;

  // Throws kValidationError naming the offending key.
  void validate() const;

  // Unknown keys are rejected; missing keys keep their defaults.
  static DetectorConfig from_json(const nlohmann::json& j);
  static DetectorConfig load(const std::filesystem::path& file);
  nlohmann::json to_json() const;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

// Inverse-document-frequency weights. Tokens never seen in the corpus get the
// weight of a document frequency of zero.
class TokenWeights {
 public:
  TokenWeights() = default;
  TokenWeights(std::map<std::string, double, std::less<>> weights, double unseen_weight);

  double weight(std::string_view token) const;
  const std::map<std::string, double, std::less<>>& weights() const { return weights_; }

 private:
  std::map<std::string, double, std::less<>> weights_;
  double unseen_weight_ = 1.0;
};

// weight(t) = ln(1 + N / (df(t) + smoothing)), N = corpus size.
TokenWeights idf_weights(const std::vector<const TokenBag*>& corpus, double smoothing = 1.0);
TokenWeights unit_weights();

// Weighted multiset Jaccard: sum w*min / sum w*max; two empty bags score 1.
double similarity(const TokenBag& a, const TokenBag& b, const TokenWeights& w);

struct ElementMatch {
  const CodeElement* before = nullptr;
  const CodeElement* after = nullptr;
  double similarity = 0.0;
};

// Phase 1 pairs identical qualified names; phase 2 greedily pairs the
// remaining same-kind elements by descending similarity (ties: nearer start
// line, then qualified names), rejecting pairs below tau_match.
std::vector<ElementMatch> match_elements(const std::vector<CodeElement>& before,
                                         const std::vector<CodeElement>& after,
                                         const TokenWeights& weights, const DetectorConfig& cfg);
std::vector<ElementMatch> match_elements(const std::vector<CodeElement>& before,
                                         const std::vector<CodeElement>& after,
                                         const DetectorConfig& cfg);

struct Anchor {
  std::string file_path;
  int line = 0;

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

// The parts of a CodeElement a report keeps: location, signature and text.
struct ElementSnapshot {
  ElementKind kind = ElementKind::kFunction;
  std::string name;
  std::string qualified_name;
  std::string owner;
  std::string file_path;
  int start_line = 1;
  int end_line = 1;
  int body_open_line = 0;
  std::optional<Signature> signature;
  std::string body_text;

  static ElementSnapshot of(const CodeElement& e);
  Anchor anchor() const { return {file_path, start_line}; }

  friend bool operator==(const ElementSnapshot&, const ElementSnapshot&) = default;
};

// For EXTRACT_FUNCTION the before/after elements are the source function
// before the edit and the extracted function; `counterpart` is the source
// function after the edit. INLINE_FUNCTION mirrors this: before is the
// inlined function, after the target after the edit, counterpart the target
// before the edit.
struct Refactoring {
  std::string id;
  RefactoringKind kind = RefactoringKind::kMoveFunction;
  std::string description;
  Anchor before_anchor;
  Anchor after_anchor;
  std::optional<ElementSnapshot> before_element;
  std::optional<ElementSnapshot> after_element;
  std::optional<ElementSnapshot> counterpart_element;
  double similarity = 0.0;
  PairLabel pair_label;
};

std::string describe(RefactoringKind kind, const ElementSnapshot& before, const ElementSnapshot& after);

// Everything classify() needs about one revision pair, parsed.
struct PairModel {
  std::vector<CodeElement> before;
  std::vector<CodeElement> after;
  std::map<std::string, std::string> renamed_files;  // before path -> after path
  const AdapterRegistry* registry = nullptr;
};

// Parses every adapter-claimed text file of the change list.
PairModel build_pair_model(const std::vector<FileChange>& changes,
                           const AdapterRegistry& registry = AdapterRegistry::builtin());

std::vector<Refactoring> classify(const std::vector<ElementMatch>& matches,
                                  const std::vector<const CodeElement*>& unmatched_before,
                                  const std::vector<const CodeElement*>& unmatched_after,
                                  const PairModel& model, const TokenWeights& weights,
                                  const DetectorConfig& cfg, const PairLabel& label = {});

// The full pipeline for one pair; sorted by (after file, after line).
std::vector<Refactoring> detect(const std::vector<FileChange>& changes, const DetectorConfig& cfg,
                                const PairLabel& label = {},
                                const AdapterRegistry& registry = AdapterRegistry::builtin());
std::vector<Refactoring> detect(const GitRepository& repo, const RevisionPair& pair,
                                const DetectorConfig& cfg);

}  // namespace refaware
