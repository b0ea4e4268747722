#include "refaware/report.hpp"

#include <cstdio>
#include <ctime>
#include <set>

#include "refaware/error.hpp"

namespace refaware {

using nlohmann::json;

namespace {

// Typed, path-tracking access to a JSON value during validation.
class Field {
 public:
  Field(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kValidationError, (path_.empty() ? "document" : path_) + ": " + what, path_);
  }

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }
  bool is_null() const { return value_.is_null(); }

  Field operator[](const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    std::string child = path_.empty() ? key : path_ + "." + key;
    if (it == value_.end()) {
      throw Error(ErrorCode::kValidationError, child + ": missing field", child);
    }
    return Field(*it, child);
  }

  std::optional<Field> optional(const char* key) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(key);
    if (it == value_.end() || it->is_null()) return std::nullopt;
    return Field(*it, path_.empty() ? key : path_ + "." + key);
  }

  std::vector<Field> items() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Field> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::string str() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }
  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }
  int non_negative() const {
    int v = integer();
    if (v < 0) fail("expected a non-negative integer");
    return v;
  }
  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }
  bool boolean() const {
    if (!value_.is_boolean()) fail("expected a boolean");
    return value_.get<bool>();
  }
  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (const auto& f : items()) out.push_back(f.str());
    return out;
  }

  // Re-raises library errors from enum parsing with this field's path.
  template <typename Fn>
  auto convert(Fn fn) const -> decltype(fn(std::string{})) {
    std::string s = str();
    try {
      return fn(s);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

 private:
  const json& value_;
  std::string path_;
};

json opt(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

std::optional<std::string> opt_str(const Field& parent, const char* key) {
  auto f = parent.optional(key);
  if (!f) return std::nullopt;
  return f->str();
}

// --- revisions ---------------------------------------------------------------

json revision_json(const RevisionRef& r) { return {{"id", r.id}, {"short_label", r.short_label}}; }

RevisionRef revision_from(const Field& f) {
  RevisionRef r{f["id"].str(), f["short_label"].str()};
  if (r.id.empty()) f["id"].fail("revision id must be non-empty");
  return r;
}

json pair_json(const RevisionPair& p) {
  return {{"before", revision_json(p.before)}, {"after", revision_json(p.after)}, {"label", p.label.to_string()}};
}

RevisionPair pair_from(const Field& f) {
  return {revision_from(f["before"]), revision_from(f["after"]), f["label"].convert(PairLabel::parse)};
}

// --- source model ------------------------------------------------------------

json signature_json(const Signature& s) {
  json params = json::array();
  for (const auto& p : s.parameters) params.push_back({{"name", p.name}, {"type", p.type}});
  return {{"receiver", opt(s.receiver)}, {"parameters", params}, {"results", s.results}};
}

Signature signature_from(const Field& f) {
  Signature s;
  s.receiver = opt_str(f, "receiver");
  for (const auto& p : f["parameters"].items()) s.parameters.push_back({p["name"].str(), p["type"].str()});
  s.results = f["results"].strings();
  return s;
}

json element_json(const ElementSnapshot& e) {
  return {{"kind", to_string(e.kind)},
          {"name", e.name},
          {"qualified_name", e.qualified_name},
          {"owner", e.owner},
          {"file_path", e.file_path},
          {"start_line", e.start_line},
          {"end_line", e.end_line},
          {"body_open_line", e.body_open_line},
          {"signature", e.signature ? signature_json(*e.signature) : json(nullptr)},
          {"body_text", e.body_text}};
}

ElementSnapshot element_from(const Field& f) {
  ElementSnapshot e;
  e.kind = f["kind"].convert(element_kind_from_string);
  e.name = f["name"].str();
  e.qualified_name = f["qualified_name"].str();
  e.owner = f["owner"].str();
  e.file_path = f["file_path"].str();
  e.start_line = f["start_line"].integer();
  e.end_line = f["end_line"].integer();
  if (e.start_line < 1) f["start_line"].fail("must be >= 1");
  if (e.end_line < e.start_line) f["end_line"].fail("must be >= start_line");
  e.body_open_line = f["body_open_line"].non_negative();
  if (auto s = f.optional("signature")) e.signature = signature_from(*s);
  if (e.kind == ElementKind::kFunction && !e.signature) f.fail("function element without signature");
  e.body_text = f["body_text"].str();
  return e;
}

std::optional<ElementSnapshot> opt_element(const Field& parent, const char* key) {
  auto f = parent.optional(key);
  if (!f) return std::nullopt;
  return element_from(*f);
}

json anchor_json(const Anchor& a) { return {{"file_path", a.file_path}, {"line", a.line}}; }
Anchor anchor_from(const Field& f) { return {f["file_path"].str(), f["line"].non_negative()}; }

// --- diffs -------------------------------------------------------------------

json hunk_json(const Hunk& h) {
  return {{"before_start", h.before_start}, {"before_len", h.before_len},
          {"after_start", h.after_start},   {"after_len", h.after_len},
          {"deleted_lines", h.deleted_lines}, {"added_lines", h.added_lines}};
}

Hunk hunk_from(const Field& f) {
  Hunk h;
  h.before_start = f["before_start"].non_negative();
  h.before_len = f["before_len"].non_negative();
  h.after_start = f["after_start"].non_negative();
  h.after_len = f["after_len"].non_negative();
  h.deleted_lines = f["deleted_lines"].strings();
  h.added_lines = f["added_lines"].strings();
  if (static_cast<int>(h.deleted_lines.size()) != h.before_len) f["before_len"].fail("must equal deleted_lines length");
  if (static_cast<int>(h.added_lines.size()) != h.after_len) f["after_len"].fail("must equal added_lines length");
  return h;
}

json file_diff_json(const FileDiff& d) {
  json hunks = json::array();
  for (const auto& h : d.hunks) hunks.push_back(hunk_json(h));
  return {{"path_before", opt(d.path_before)}, {"path_after", opt(d.path_after)},
          {"status", to_string(d.status)},     {"binary", d.binary},
          {"hunks", hunks}};
}

FileDiff file_diff_from(const Field& f) {
  FileDiff d;
  d.path_before = opt_str(f, "path_before");
  d.path_after = opt_str(f, "path_after");
  d.status = f["status"].convert(file_status_from_string);
  d.binary = f["binary"].boolean();
  for (const auto& h : f["hunks"].items()) d.hunks.push_back(hunk_from(h));
  if ((d.status == FileStatus::kAdded) != !d.path_before) f["path_before"].fail("inconsistent with status");
  if ((d.status == FileStatus::kDeleted) != !d.path_after) f["path_after"].fail("inconsistent with status");
  return d;
}

json rows_json(const std::vector<DiffRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"left", opt(r.left)}, {"right", opt(r.right)}, {"status", to_string(r.status)}});
  }
  return out;
}

std::vector<DiffRow> rows_from(const Field& f) {
  std::vector<DiffRow> rows;
  for (const auto& item : f.items()) {
    DiffRow r{opt_str(item, "left"), opt_str(item, "right"), item["status"].convert(row_status_from_string)};
    bool ok = r.status == RowStatus::kAdded     ? !r.left && r.right
              : r.status == RowStatus::kRemoved ? r.left && !r.right
                                                : r.left && r.right;
    if (!ok) item.fail("row sides inconsistent with status");
    rows.push_back(std::move(r));
  }
  return rows;
}

AlignedDiff aligned_from(const Field& f) {
  AlignedDiff d;
  d.rows = rows_from(f["rows"]);
  if (auto x = f.optional("extracted_body")) d.extracted_body = rows_from(*x);
  if (auto s = f.optional("signature_delta")) {
    d.signature_delta = SignatureDelta{signature_from((*s)["before"]), signature_from((*s)["after"])};
  }
  return d;
}

json churn_json(const ChurnCount& c) { return {{"added", c.added}, {"deleted", c.deleted}, {"total", c.total}}; }

ChurnCount churn_from(const Field& f) {
  ChurnCount c{f["added"].non_negative(), f["deleted"].non_negative(), f["total"].non_negative()};
  if (c.total != c.added + c.deleted) f["total"].fail("must equal added + deleted");
  return c;
}

json distribution_json(const Distribution& d) {
  return {{"count", d.count}, {"min", d.min}, {"q1", d.q1}, {"median", d.median}, {"q3", d.q3}, {"max", d.max}};
}

}  // namespace

// --- refactorings ------------------------------------------------------------

json to_json(const AlignedDiff& d) {
  json sig = nullptr;
  if (d.signature_delta) {
    sig = {{"before", signature_json(d.signature_delta->before)},
           {"after", signature_json(d.signature_delta->after)}};
  }
  return {{"rows", rows_json(d.rows)},
          {"extracted_body", d.extracted_body ? rows_json(*d.extracted_body) : json(nullptr)},
          {"signature_delta", sig}};
}

json to_json(const Refactoring& r) {
  auto el = [](const std::optional<ElementSnapshot>& e) { return e ? element_json(*e) : json(nullptr); };
  return {{"id", r.id},
          {"kind", to_string(r.kind)},
          {"kind_name", display_name(r.kind)},
          {"description", r.description},
          {"before_anchor", anchor_json(r.before_anchor)},
          {"after_anchor", anchor_json(r.after_anchor)},
          {"before_element", el(r.before_element)},
          {"after_element", el(r.after_element)},
          {"counterpart_element", el(r.counterpart_element)},
          {"similarity", r.similarity},
          {"pair_label", r.pair_label.to_string()}};
}

namespace {

Refactoring refactoring_from(const Field& f) {
  Refactoring r;
  r.id = f["id"].str();
  if (r.id.empty()) f["id"].fail("must be non-empty");
  r.kind = f["kind"].convert(refactoring_kind_from_string);
  r.description = f["description"].str();
  r.before_anchor = anchor_from(f["before_anchor"]);
  r.after_anchor = anchor_from(f["after_anchor"]);
  r.before_element = opt_element(f, "before_element");
  r.after_element = opt_element(f, "after_element");
  r.counterpart_element = opt_element(f, "counterpart_element");
  r.similarity = f["similarity"].number();
  if (r.similarity < 0.0 || r.similarity > 1.0) f["similarity"].fail("must lie in [0,1]");
  r.pair_label = f["pair_label"].convert(PairLabel::parse);
  return r;
}

}  // namespace

json to_json(const Summary& s) {
  json out = json::object();
  for (const auto& [kind, ks] : s.by_kind) {
    out[to_string(kind)] = {
        {"plain_dcc", ks.plain_dcc ? distribution_json(*ks.plain_dcc) : json(nullptr)},
        {"enhanced_dcc", ks.enhanced_dcc ? distribution_json(*ks.enhanced_dcc) : json(nullptr)},
        {"move_distance", ks.move_distance ? distribution_json(*ks.move_distance) : json(nullptr)}};
  }
  return out;
}

Summary AnalysisReport::summary() const {
  std::vector<RefactoringMetrics> records;
  for (const auto& p : pairs) {
    for (const auto& e : p.refactorings) {
      RefactoringMetrics m{e.refactoring.kind, std::nullopt, std::nullopt};
      for (const auto& d : p.dcc) {
        if (d.refactoring_id == e.refactoring.id) m.dcc = d;
      }
      for (const auto& md : p.move_distances) {
        if (md.refactoring_id == e.refactoring.id) m.move = md;
      }
      records.push_back(std::move(m));
    }
  }
  return refaware::summarize(records);
}

const RefactoringEntry* AnalysisReport::find_refactoring(const std::string& id) const {
  for (const auto& p : pairs) {
    for (const auto& e : p.refactorings) {
      if (e.refactoring.id == id) return &e;
    }
  }
  return nullptr;
}

json to_json(const AnalysisReport& report) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    json files = json::array();
    for (const auto& f : p.files) files.push_back(file_diff_json(f));
    json refs = json::array();
    for (const auto& e : p.refactorings) {
      json r = to_json(e.refactoring);
      r["aligned_diff"] = to_json(e.aligned);
      refs.push_back(std::move(r));
    }
    json dcc = json::array();
    for (const auto& d : p.dcc) {
      dcc.push_back({{"refactoring_id", d.refactoring_id},
                     {"plain", churn_json(d.plain)},
                     {"enhanced", churn_json(d.enhanced)}});
    }
    json moves = json::array();
    for (const auto& m : p.move_distances) {
      moves.push_back({{"refactoring_id", m.refactoring_id},
                       {"same_file", m.same_file},
                       {"distance_lines", m.distance_lines ? json(*m.distance_lines) : json(nullptr)}});
    }
    pairs.push_back({{"pair", pair_json(p.pair)},
                     {"files", files},
                     {"refactorings", refs},
                     {"metrics", {{"dcc", dcc}, {"move_distances", moves}}},
                     {"timing", {{"pair_label", p.timing.pair_label.to_string()},
                                 {"wall_seconds", p.timing.wall_seconds}}}});
  }
  return {{"schema_version", report.schema_version},
          {"repo_id", report.repo_id},
          {"change_set_id", report.change_set_id},
          {"created_at", report.created_at},
          {"detector_config", report.detector_config.to_json()},
          {"pairs", pairs},
          {"summary", to_json(report.summary())}};
}

AnalysisReport report_from_json(const json& j) {
  Field root(j, "");
  if (!j.is_object()) root.fail("expected an object");
  AnalysisReport r;
  r.schema_version = root["schema_version"].integer();
  if (r.schema_version != kSchemaVersion) {
    root["schema_version"].fail("unsupported schema version " + std::to_string(r.schema_version));
  }
  r.repo_id = root["repo_id"].str();
  r.change_set_id = root["change_set_id"].str();
  if (r.repo_id.empty()) root["repo_id"].fail("must be non-empty");
  if (r.change_set_id.empty()) root["change_set_id"].fail("must be non-empty");
  r.created_at = root["created_at"].str();
  if (!parse_utc_millis(r.created_at)) root["created_at"].fail("expected a UTC timestamp");
  try {
    r.detector_config = DetectorConfig::from_json(root["detector_config"].raw());
  } catch (const Error& e) {
    std::string path = "detector_config" + (e.path().empty() ? "" : "." + e.path());
    throw Error(ErrorCode::kValidationError, path + ": " + e.what(), path);
  }

  std::set<std::pair<std::string, std::string>> pair_keys;
  std::set<std::string> ids;
  bool seen_main = false;
  for (const auto& pf : root["pairs"].items()) {
    PairResult p;
    p.pair = pair_from(pf["pair"]);
    if (!pair_keys.insert({p.pair.before.id, p.pair.after.id}).second) pf["pair"].fail("duplicate revision pair");
    if (p.pair.label.kind == PairLabel::Kind::kMain) {
      if (seen_main) pf["pair"]["label"].fail("more than one MAIN pair");
      seen_main = true;
    }
    for (const auto& f : pf["files"].items()) p.files.push_back(file_diff_from(f));
    for (const auto& rf : pf["refactorings"].items()) {
      RefactoringEntry e{refactoring_from(rf), aligned_from(rf["aligned_diff"])};
      if (!ids.insert(e.refactoring.id).second) rf["id"].fail("duplicate refactoring id");
      p.refactorings.push_back(std::move(e));
    }
    Field metrics = pf["metrics"];
    for (const auto& df : metrics["dcc"].items()) {
      p.dcc.push_back({df["refactoring_id"].str(), churn_from(df["plain"]), churn_from(df["enhanced"])});
    }
    for (const auto& mf : metrics["move_distances"].items()) {
      MoveDistance m;
      m.refactoring_id = mf["refactoring_id"].str();
      m.same_file = mf["same_file"].boolean();
      if (auto d = mf.optional("distance_lines")) m.distance_lines = d->non_negative();
      if (m.same_file != m.distance_lines.has_value()) mf.fail("distance_lines present iff same_file");
      p.move_distances.push_back(std::move(m));
    }
    Field timing = pf["timing"];
    p.timing.pair_label = timing["pair_label"].convert(PairLabel::parse);
    p.timing.wall_seconds = timing["wall_seconds"].number();
    if (p.timing.wall_seconds < 0) timing["wall_seconds"].fail("must be non-negative");
    r.pairs.push_back(std::move(p));
  }
  if (!r.pairs.empty() && !seen_main) root["pairs"].fail("no MAIN pair");
  return r;
}

// --- events ------------------------------------------------------------------

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::kRClickLeft: return "R_CLICK_LEFT";
    case EventKind::kRClickRight: return "R_CLICK_RIGHT";
    case EventKind::kGoToSource: return "GO_TO_SOURCE";
    case EventKind::kWindowOpen: return "WINDOW_OPEN";
    case EventKind::kWindowClose: return "WINDOW_CLOSE";
  }
  return "WINDOW_OPEN";
}

EventKind event_kind_from_string(const std::string& s) {
  for (auto k : {EventKind::kRClickLeft, EventKind::kRClickRight, EventKind::kGoToSource,
                 EventKind::kWindowOpen, EventKind::kWindowClose}) {
    if (to_string(k) == s) return k;
  }
  throw Error(ErrorCode::kValidationError, "invalid event kind '" + s + "'");
}

std::optional<std::int64_t> parse_utc_millis(const std::string& ts) {
  int year, month, day, hour, minute, second;
  int consumed = 0;
  if (std::sscanf(ts.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%n", &year, &month, &day, &hour, &minute, &second,
                  &consumed) != 6 ||
      consumed != 19) {
    return std::nullopt;
  }
  std::size_t pos = 19;
  int millis = 0;
  if (pos < ts.size() && ts[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < ts.size() && ts[pos] >= '0' && ts[pos] <= '9') {
      if (digits < 3) millis = millis * 10 + (ts[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0) return std::nullopt;
    for (int d = digits; d < 3; ++d) millis *= 10;
  }
  if (pos + 1 != ts.size() || ts[pos] != 'Z') return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60) {
    return std::nullopt;
  }
  std::tm tm{};
  tm.tm_year = year - 1900;
  tm.tm_mon = month - 1;
  tm.tm_mday = day;
  tm.tm_hour = hour;
  tm.tm_min = minute;
  tm.tm_sec = second;
  return static_cast<std::int64_t>(timegm(&tm)) * 1000 + millis;
}

json to_json(const ReviewEvent& e) {
  return {{"repo_id", e.repo_id}, {"change_set_id", e.change_set_id}, {"refactoring_id", e.refactoring_id},
          {"event", to_string(e.event)}, {"at", e.at}, {"session", e.session}};
}

ReviewEvent event_from_json(const json& j) {
  Field root(j, "");
  if (!j.is_object()) root.fail("expected an object");
  ReviewEvent e;
  e.repo_id = root["repo_id"].str();
  e.change_set_id = root["change_set_id"].str();
  e.refactoring_id = root["refactoring_id"].str();
  e.event = root["event"].convert(event_kind_from_string);
  e.at = root["at"].str();
  if (!parse_utc_millis(e.at)) root["at"].fail("expected a UTC timestamp");
  if (auto s = root.optional("session")) e.session = s->str();
  return e;
}

// --- canonical form ------------------------------------------------------------

std::string canonical_dump(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

std::string canonical_dump(const AnalysisReport& report) { return canonical_dump(to_json(report)); }

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kValidationError, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace refaware
