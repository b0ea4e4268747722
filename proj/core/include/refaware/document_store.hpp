#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "refaware/report.hpp"

namespace refaware {

struct ReportKey {
  std::string repo_id;
  std::string change_set_id;

  auto operator<=>(const ReportKey&) const = default;
};

// Persistence behind the REST API. Reports are last-write-wins per key;
// events are append-only.
class DocumentStore {
 public:
  virtual ~DocumentStore() = default;

  // Returns true when the key was new.
  virtual bool store(const AnalysisReport& report) = 0;
  // Throws kNotFound for an unknown key.
  virtual AnalysisReport fetch(const ReportKey& key) const = 0;
  virtual bool contains(const ReportKey& key) const = 0;
  // Throws kNotFound when the report is unknown and kValidationError when the
  // event does not fit the report or the session's timeline.
  virtual void record_event(const ReviewEvent& event) = 0;
  virtual std::vector<ReviewEvent> list_events(const ReportKey& key) const = 0;
};

// One canonical JSON file per report plus one JSON-lines event log per report
// under a data directory. Writers to one key are serialized; a report file is
// replaced atomically, so readers never observe a partial document.
class FileDocumentStore final : public DocumentStore {
 public:
  explicit FileDocumentStore(std::filesystem::path data_dir);

  bool store(const AnalysisReport& report) override;
  AnalysisReport fetch(const ReportKey& key) const override;
  bool contains(const ReportKey& key) const override;
  void record_event(const ReviewEvent& event) override;
  std::vector<ReviewEvent> list_events(const ReportKey& key) const override;

  // The stored canonical text, byte for byte.
  std::optional<std::string> fetch_raw(const ReportKey& key) const;

  std::filesystem::path report_path(const ReportKey& key) const;
  std::filesystem::path event_log_path(const ReportKey& key) const;

 private:
  std::mutex& key_mutex(const ReportKey& key) const;

  std::filesystem::path root_;
  mutable std::mutex registry_mutex_;
  mutable std::map<ReportKey, std::unique_ptr<std::mutex>> key_mutexes_;
};

// Percent-encodes everything outside [A-Za-z0-9._-] so that any id maps to a
// single safe path component.
std::string encode_path_component(const std::string& s);

}  // namespace refaware
