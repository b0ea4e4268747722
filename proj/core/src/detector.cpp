#include "refaware/detector.hpp"

#include "refaware/diff.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <tuple>

#include "refaware/diff.hpp"
#include "refaware/error.hpp"

namespace refaware {

namespace {

struct KindInfo {
  RefactoringKind kind;
  std::string_view id;
  std::string_view display;
};

constexpr KindInfo kKinds[] = {
    {RefactoringKind::kMoveFunction, "MOVE_FUNCTION", "Move Function"},
    {RefactoringKind::kMoveAndRenameFunction, "MOVE_AND_RENAME_FUNCTION", "Move and Rename Function"},
    {RefactoringKind::kMoveType, "MOVE_TYPE", "Move Type"},
    {RefactoringKind::kMoveFile, "MOVE_FILE", "Move File"},
    {RefactoringKind::kExtractFunction, "EXTRACT_FUNCTION", "Extract Function"},
    {RefactoringKind::kInlineFunction, "INLINE_FUNCTION", "Inline Function"},
    {RefactoringKind::kRenameFunction, "RENAME_FUNCTION", "Rename Function"},
    {RefactoringKind::kRenameType, "RENAME_TYPE", "Rename Type"},
    {RefactoringKind::kChangeSignature, "CHANGE_SIGNATURE", "Change Signature"},
    {RefactoringKind::kPullUp, "PULL_UP", "Pull Up"},
    {RefactoringKind::kPushDown, "PUSH_DOWN", "Push Down"},
};

const KindInfo& info(RefactoringKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  return kKinds[0];
}

}  // namespace

std::string to_string(RefactoringKind kind) { return std::string(info(kind).id); }
std::string display_name(RefactoringKind kind) { return std::string(info(kind).display); }

RefactoringKind refactoring_kind_from_string(const std::string& s) {
  for (const auto& k : kKinds) {
    if (k.id == s) return k.kind;
  }
  throw Error(ErrorCode::kValidationError, "invalid refactoring kind '" + s + "'");
}

bool is_move(RefactoringKind kind) {
  return kind == RefactoringKind::kMoveFunction || kind == RefactoringKind::kMoveAndRenameFunction ||
         kind == RefactoringKind::kMoveType;
}

// ---------------------------------------------------------------------------
// DetectorConfig

void DetectorConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in_unit(tau_match)) throw Error(ErrorCode::kValidationError, "tau_match must lie in (0,1]", "tau_match");
  if (!in_unit(tau_extract)) {
    throw Error(ErrorCode::kValidationError, "tau_extract must lie in (0,1]", "tau_extract");
  }
  if (min_extract_tokens < 1) {
    throw Error(ErrorCode::kValidationError, "min_extract_tokens must be >= 1", "min_extract_tokens");
  }
  if (!(idf_smoothing > 0.0) || !std::isfinite(idf_smoothing)) {
    throw Error(ErrorCode::kValidationError, "idf_smoothing must be positive", "idf_smoothing");
  }
}

DetectorConfig DetectorConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidationError, "detector config must be an object");
  DetectorConfig cfg;
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw Error(ErrorCode::kValidationError, key + " must be a number", key);
      return value.get<double>();
    };
    if (key == "tau_match") {
      cfg.tau_match = number();
    } else if (key == "tau_extract") {
      cfg.tau_extract = number();
    } else if (key == "idf_smoothing") {
      cfg.idf_smoothing = number();
    } else if (key == "min_extract_tokens") {
      if (!value.is_number_integer()) {
        throw Error(ErrorCode::kValidationError, key + " must be an integer", key);
      }
      cfg.min_extract_tokens = value.get<int>();
    } else {
      throw Error(ErrorCode::kValidationError, "unknown detector config key '" + key + "'", key);
    }
  }
  cfg.validate();
  return cfg;
}

DetectorConfig DetectorConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config file " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kValidationError, "config file " + file.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json DetectorConfig::to_json() const {
  return {{"tau_match", tau_match},
          {"tau_extract", tau_extract},
          {"min_extract_tokens", min_extract_tokens},
          {"idf_smoothing", idf_smoothing}};
}

// ---------------------------------------------------------------------------
// Weights and similarity

TokenWeights::TokenWeights(std::map<std::string, double, std::less<>> weights, double unseen_weight)
    : weights_(std::move(weights)), unseen_weight_(unseen_weight) {}

double TokenWeights::weight(std::string_view token) const {
  auto it = weights_.find(token);
  return it == weights_.end() ? unseen_weight_ : it->second;
}

TokenWeights idf_weights(const std::vector<const TokenBag*>& corpus, double smoothing) {
  std::map<std::string, int, std::less<>> df;
  for (const TokenBag* bag : corpus) {
    for (const auto& [tok, n] : bag->counts()) ++df[tok];
  }
  const double n = static_cast<double>(corpus.size());
  std::map<std::string, double, std::less<>> w;
  for (const auto& [tok, d] : df) w.emplace(tok, std::log(1.0 + n / (d + smoothing)));
  return TokenWeights(std::move(w), std::log(1.0 + n / smoothing));
}

TokenWeights unit_weights() { return TokenWeights({}, 1.0); }

double similarity(const TokenBag& a, const TokenBag& b, const TokenWeights& w) {
  double num = 0.0;
  double den = 0.0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  const auto ea = a.counts().end();
  const auto eb = b.counts().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      den += w.weight(ia->first) * ia->second;
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      den += w.weight(ib->first) * ib->second;
      ++ib;
    } else {
      double wt = w.weight(ia->first);
      num += wt * std::min(ia->second, ib->second);
      den += wt * std::max(ia->second, ib->second);
      ++ia;
      ++ib;
    }
  }
  if (den == 0.0) return 1.0;
  return std::clamp(num / den, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Matching

std::vector<ElementMatch> match_elements(const std::vector<CodeElement>& before,
                                         const std::vector<CodeElement>& after,
                                         const TokenWeights& weights, const DetectorConfig& cfg) {
  std::vector<ElementMatch> matches;
  std::vector<bool> used_before(before.size(), false);
  std::vector<bool> used_after(after.size(), false);

  std::map<std::string_view, std::size_t> after_by_name;
  for (std::size_t j = 0; j < after.size(); ++j) after_by_name.emplace(after[j].qualified_name, j);
  for (std::size_t i = 0; i < before.size(); ++i) {
    auto it = after_by_name.find(before[i].qualified_name);
    if (it == after_by_name.end() || used_after[it->second]) continue;
    const CodeElement& a = after[it->second];
    if (a.kind != before[i].kind) continue;
    used_before[i] = true;
    used_after[it->second] = true;
    matches.push_back({&before[i], &a, similarity(before[i].tokens, a.tokens, weights)});
  }

  struct Candidate {
    double sim;
    int line_gap;
    std::size_t i;
    std::size_t j;
  };
  std::vector<Candidate> candidates;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (used_before[i]) continue;
    for (std::size_t j = 0; j < after.size(); ++j) {
      if (used_after[j] || before[i].kind != after[j].kind) continue;
      double s = similarity(before[i].tokens, after[j].tokens, weights);
      if (s < cfg.tau_match) continue;
      candidates.push_back({s, std::abs(before[i].start_line - after[j].start_line), i, j});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](const Candidate& x, const Candidate& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (x.line_gap != y.line_gap) return x.line_gap < y.line_gap;
    return std::tie(before[x.i].qualified_name, after[x.j].qualified_name) <
           std::tie(before[y.i].qualified_name, after[y.j].qualified_name);
  });
  for (const auto& c : candidates) {
    if (used_before[c.i] || used_after[c.j]) continue;
    used_before[c.i] = true;
    used_after[c.j] = true;
    matches.push_back({&before[c.i], &after[c.j], c.sim});
  }
  return matches;
}

std::vector<ElementMatch> match_elements(const std::vector<CodeElement>& before,
                                         const std::vector<CodeElement>& after,
                                         const DetectorConfig& cfg) {
  std::vector<const TokenBag*> corpus;
  for (const auto& e : before) corpus.push_back(&e.tokens);
  for (const auto& e : after) corpus.push_back(&e.tokens);
  return match_elements(before, after, idf_weights(corpus, cfg.idf_smoothing), cfg);
}

// ---------------------------------------------------------------------------
// Classification

ElementSnapshot ElementSnapshot::of(const CodeElement& e) {
  return {e.kind,       e.name,     e.qualified_name, e.owner,     e.file_path,
          e.start_line, e.end_line, e.body_open_line, e.signature, e.body_text};
}

std::string describe(RefactoringKind kind, const ElementSnapshot& b, const ElementSnapshot& a) {
  switch (kind) {
    case RefactoringKind::kMoveFunction: return "method " + b.name + "() moved";
    case RefactoringKind::kMoveAndRenameFunction:
      return "method " + b.name + "() moved and renamed to " + a.name + "()";
    case RefactoringKind::kMoveType:
      return b.name == a.name ? "type " + b.name + " moved"
                              : "type " + b.name + " moved and renamed to " + a.name;
    case RefactoringKind::kMoveFile: return "file " + b.file_path + " moved to " + a.file_path;
    case RefactoringKind::kExtractFunction:
      return "method " + a.name + "() extracted from method " + b.name + "()";
    case RefactoringKind::kInlineFunction:
      return "method " + b.name + "() inlined into method " + a.name + "()";
    case RefactoringKind::kRenameFunction: return "method " + b.name + "() renamed to " + a.name + "()";
    case RefactoringKind::kRenameType: return "type " + b.name + " renamed to " + a.name;
    case RefactoringKind::kChangeSignature: return "signature of method " + a.name + "() changed";
    case RefactoringKind::kPullUp: return "method " + b.name + "() pulled up";
    case RefactoringKind::kPushDown: return "method " + b.name + "() pushed down";
  }
  return {};
}

namespace {

// Classification scope of an element: its file (after renames) and owner.
std::pair<std::string, std::string> scope_of(const CodeElement& e,
                                             const std::map<std::string, std::string>* renames) {
  std::string path = e.file_path;
  if (renames) {
    auto it = renames->find(path);
    if (it != renames->end()) path = it->second;
  }
  return {path, e.owner};
}

std::optional<RefactoringKind> kind_for_match(const ElementMatch& m, const PairModel& model) {
  const CodeElement& b = *m.before;
  const CodeElement& a = *m.after;
  if (b.kind == ElementKind::kFile) {
    auto it = model.renamed_files.find(b.file_path);
    if (it != model.renamed_files.end() && it->second == a.file_path) return RefactoringKind::kMoveFile;
    return std::nullopt;
  }
  const bool same_name = b.name == a.name;
  const bool same_scope = scope_of(b, &model.renamed_files) == scope_of(a, nullptr);
  const bool function = b.kind == ElementKind::kFunction;
  if (same_name && same_scope) {
    if (function && b.signature != a.signature) return RefactoringKind::kChangeSignature;
    return std::nullopt;
  }
  if (same_scope) return function ? RefactoringKind::kRenameFunction : RefactoringKind::kRenameType;
  if (!function) return RefactoringKind::kMoveType;
  return same_name ? RefactoringKind::kMoveFunction : RefactoringKind::kMoveAndRenameFunction;
}

Refactoring make_refactoring(RefactoringKind kind, const CodeElement& before, const CodeElement& after,
                             double sim, const PairLabel& label) {
  Refactoring r;
  r.kind = kind;
  r.before_element = ElementSnapshot::of(before);
  r.after_element = ElementSnapshot::of(after);
  r.before_anchor = r.before_element->anchor();
  r.after_anchor = r.after_element->anchor();
  r.description = describe(kind, *r.before_element, *r.after_element);
  r.similarity = sim;
  r.pair_label = label;
  return r;
}

int calls_in(const PairModel& model, const CodeElement& e, const std::string& callee) {
  const LanguageAdapter* adapter = model.registry ? model.registry->find(e.file_path) : nullptr;
  return adapter ? adapter->count_calls(e.body_text, callee) : 0;
}

// Tokens of the lines a function lost (or gained) between revisions. Working
// on diff lines keeps a new call site's arguments from cancelling tokens of
// the moved statements.
TokenBag changed_line_tokens(const PairModel& model, const CodeElement& from, const CodeElement& to,
                             bool deleted) {
  TokenBag out;
  const LanguageAdapter* adapter = model.registry ? model.registry->find(from.file_path) : nullptr;
  if (!adapter) return deleted ? from.tokens.minus(to.tokens) : to.tokens.minus(from.tokens);
  for (const Hunk& h : line_diff(from.body_text, to.body_text)) {
    for (const auto& line : deleted ? h.deleted_lines : h.added_lines) {
      for (const auto& t : adapter->token_sequence(line)) out.add(t);
    }
  }
  return out;
}

struct Source {
  const CodeElement* before;
  const CodeElement* after;
};

// Best composition source for `moved` (extracted or inlined code): the source
// whose token delta resembles the moved body and which gained (extract) or
// lost (inline) a call to it.
std::optional<std::pair<Source, double>> best_source(const CodeElement& moved, const std::vector<Source>& sources,
                                                     bool extract, const PairModel& model,
                                                     const TokenWeights& weights, const DetectorConfig& cfg) {
  std::optional<std::pair<Source, double>> best;
  int best_gap = 0;
  for (const Source& src : sources) {
    const TokenBag delta = extract ? changed_line_tokens(model, *src.before, *src.after, true)
                                   : changed_line_tokens(model, *src.before, *src.after, false);
    if (delta.empty()) continue;
    double s = similarity(moved.block_tokens, delta, weights);
    if (s < cfg.tau_extract) continue;
    int calls_before = calls_in(model, *src.before, moved.name);
    int calls_after = calls_in(model, *src.after, moved.name);
    if (extract ? calls_after <= calls_before : calls_before <= calls_after) continue;
    const CodeElement& near = extract ? *src.after : *src.before;
    int gap = near.file_path == moved.file_path ? std::abs(near.start_line - moved.start_line) : 1 << 30;
    bool better = !best || s > best->second || (s == best->second && gap < best_gap) ||
                  (s == best->second && gap == best_gap &&
                   src.before->qualified_name < best->first.before->qualified_name);
    if (better) {
      best = std::make_pair(src, s);
      best_gap = gap;
    }
  }
  return best;
}

}  // namespace

std::vector<Refactoring> classify(const std::vector<ElementMatch>& matches,
                                  const std::vector<const CodeElement*>& unmatched_before,
                                  const std::vector<const CodeElement*>& unmatched_after,
                                  const PairModel& model, const TokenWeights& weights,
                                  const DetectorConfig& cfg, const PairLabel& label) {
  std::vector<Refactoring> out;
  std::vector<Source> sources;
  for (const auto& m : matches) {
    auto kind = kind_for_match(m, model);
    if (kind) out.push_back(make_refactoring(*kind, *m.before, *m.after, m.similarity, label));
    // A function already reported as moved is not also a composition source.
    if (m.before->kind == ElementKind::kFunction && !(kind && is_move(*kind))) {
      sources.push_back({m.before, m.after});
    }
  }

  for (const CodeElement* f : unmatched_after) {
    if (f->kind != ElementKind::kFunction || f->tokens.total() < cfg.min_extract_tokens) continue;
    if (auto hit = best_source(*f, sources, /*extract=*/true, model, weights, cfg)) {
      Refactoring r = make_refactoring(RefactoringKind::kExtractFunction, *hit->first.before, *f,
                                       hit->second, label);
      r.counterpart_element = ElementSnapshot::of(*hit->first.after);
      out.push_back(std::move(r));
    }
  }
  for (const CodeElement* g : unmatched_before) {
    if (g->kind != ElementKind::kFunction || g->tokens.total() < cfg.min_extract_tokens) continue;
    if (auto hit = best_source(*g, sources, /*extract=*/false, model, weights, cfg)) {
      Refactoring r = make_refactoring(RefactoringKind::kInlineFunction, *g, *hit->first.after,
                                       hit->second, label);
      r.counterpart_element = ElementSnapshot::of(*hit->first.before);
      out.push_back(std::move(r));
    }
  }
  return out;
}

PairModel build_pair_model(const std::vector<FileChange>& changes, const AdapterRegistry& registry) {
  PairModel model;
  model.registry = &registry;
  for (const auto& fc : changes) {
    if (fc.binary) continue;
    if (fc.path_before && fc.content_before) {
      if (const LanguageAdapter* a = registry.find(*fc.path_before)) {
        auto elems = parse_source(*fc.path_before, *fc.content_before, *a);
        std::move(elems.begin(), elems.end(), std::back_inserter(model.before));
      }
    }
    if (fc.path_after && fc.content_after) {
      if (const LanguageAdapter* a = registry.find(*fc.path_after)) {
        auto elems = parse_source(*fc.path_after, *fc.content_after, *a);
        std::move(elems.begin(), elems.end(), std::back_inserter(model.after));
      }
    }
    if (fc.status == FileStatus::kRenamed && fc.path_before && fc.path_after) {
      model.renamed_files.emplace(*fc.path_before, *fc.path_after);
    }
  }
  return model;
}

std::vector<Refactoring> detect(const std::vector<FileChange>& changes, const DetectorConfig& cfg,
                                const PairLabel& label, const AdapterRegistry& registry) {
  cfg.validate();
  const PairModel model = build_pair_model(changes, registry);
  if (model.before.empty() && model.after.empty()) return {};

  std::vector<const TokenBag*> corpus;
  for (const auto& e : model.before) corpus.push_back(&e.tokens);
  for (const auto& e : model.after) corpus.push_back(&e.tokens);
  const TokenWeights weights = idf_weights(corpus, cfg.idf_smoothing);

  const auto matches = match_elements(model.before, model.after, weights, cfg);
  std::set<const CodeElement*> matched;
  for (const auto& m : matches) {
    matched.insert(m.before);
    matched.insert(m.after);
  }
  std::vector<const CodeElement*> unmatched_before, unmatched_after;
  for (const auto& e : model.before) {
    if (!matched.count(&e)) unmatched_before.push_back(&e);
  }
  for (const auto& e : model.after) {
    if (!matched.count(&e)) unmatched_after.push_back(&e);
  }

  auto refactorings = classify(matches, unmatched_before, unmatched_after, model, weights, cfg, label);
  std::sort(refactorings.begin(), refactorings.end(), [](const Refactoring& x, const Refactoring& y) {
    return std::tie(x.after_anchor.file_path, x.after_anchor.line, x.kind, x.before_anchor.file_path,
                    x.before_anchor.line) < std::tie(y.after_anchor.file_path, y.after_anchor.line, y.kind,
                                                     y.before_anchor.file_path, y.before_anchor.line);
  });
  return refactorings;
}

std::vector<Refactoring> detect(const GitRepository& repo, const RevisionPair& pair,
                                const DetectorConfig& cfg) {
  return detect(repo.changed_files(pair), cfg, pair.label);
}

}  // namespace refaware
