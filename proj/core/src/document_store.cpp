#include "refaware/document_store.hpp"

#include <atomic>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "refaware/error.hpp"

namespace refaware {

namespace fs = std::filesystem;

std::string encode_path_component(const std::string& s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                c == '_' || (c == '.' && !out.empty());
    if (safe) {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 0xF]);
    }
  }
  return out.empty() ? "%" : out;
}

namespace {

std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomically(const fs::path& target, const std::string& content) {
  static std::atomic<unsigned long> counter{0};
  fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIoError, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::kIoError, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::kIoError, "cannot replace " + target.string() + ": " + ec.message());
  }
}

}  // namespace

FileDocumentStore::FileDocumentStore(fs::path data_dir) : root_(std::move(data_dir)) {
  fs::create_directories(root_ / "reports");
  fs::create_directories(root_ / "events");
}

fs::path FileDocumentStore::report_path(const ReportKey& key) const {
  return root_ / "reports" / encode_path_component(key.repo_id) /
         (encode_path_component(key.change_set_id) + ".json");
}

fs::path FileDocumentStore::event_log_path(const ReportKey& key) const {
  return root_ / "events" / encode_path_component(key.repo_id) /
         (encode_path_component(key.change_set_id) + ".jsonl");
}

std::mutex& FileDocumentStore::key_mutex(const ReportKey& key) const {
  std::lock_guard lock(registry_mutex_);
  auto& slot = key_mutexes_[key];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

bool FileDocumentStore::store(const AnalysisReport& report) {
  // Round-tripping through the validator rejects documents we could not serve back.
  const std::string text = canonical_dump(report);
  report_from_json(parse_json(text));
  ReportKey key{report.repo_id, report.change_set_id};
  std::lock_guard lock(key_mutex(key));
  const fs::path path = report_path(key);
  bool created = !fs::exists(path);
  write_atomically(path, text);
  return created;
}

std::optional<std::string> FileDocumentStore::fetch_raw(const ReportKey& key) const {
  return slurp(report_path(key));
}

AnalysisReport FileDocumentStore::fetch(const ReportKey& key) const {
  auto text = fetch_raw(key);
  if (!text) {
    throw Error(ErrorCode::kNotFound, "no report for " + key.repo_id + "/" + key.change_set_id);
  }
  return report_from_json(parse_json(*text));
}

bool FileDocumentStore::contains(const ReportKey& key) const { return fs::exists(report_path(key)); }

void FileDocumentStore::record_event(const ReviewEvent& event) {
  ReportKey key{event.repo_id, event.change_set_id};
  AnalysisReport report = fetch(key);
  if (!report.find_refactoring(event.refactoring_id)) {
    throw Error(ErrorCode::kValidationError, "unknown refactoring id '" + event.refactoring_id + "'",
                "refactoring_id");
  }
  const auto at = parse_utc_millis(event.at);
  if (!at) throw Error(ErrorCode::kValidationError, "at: expected a UTC timestamp", "at");

  std::lock_guard lock(key_mutex(key));
  const auto existing = list_events(key);
  if (!event.session.empty()) {
    for (auto it = existing.rbegin(); it != existing.rend(); ++it) {
      if (it->session != event.session) continue;
      if (*parse_utc_millis(it->at) > *at) {
        throw Error(ErrorCode::kValidationError, "timestamps must not decrease within a session", "at");
      }
      break;
    }
  }
  if (event.event == EventKind::kWindowClose) {
    for (auto it = existing.rbegin(); it != existing.rend(); ++it) {
      if (it->refactoring_id != event.refactoring_id || it->session != event.session) continue;
      if (it->event == EventKind::kWindowClose) break;
      if (it->event == EventKind::kWindowOpen) {
        if (*parse_utc_millis(it->at) > *at) {
          throw Error(ErrorCode::kValidationError, "window closed before it was opened", "at");
        }
        break;
      }
    }
  }

  const fs::path path = event_log_path(key);
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(ErrorCode::kIoError, "cannot append to " + path.string());
  out << to_json(event).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
  out.flush();
  if (!out) throw Error(ErrorCode::kIoError, "short write to " + path.string());
}

std::vector<ReviewEvent> FileDocumentStore::list_events(const ReportKey& key) const {
  std::vector<ReviewEvent> events;
  std::ifstream in(event_log_path(key), std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      events.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception&) {
      // A torn final line from an interrupted append is not an event.
    }
  }
  return events;
}

}  // namespace refaware
