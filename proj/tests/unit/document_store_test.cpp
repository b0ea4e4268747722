#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include "refaware/document_store.hpp"
#include "refaware/error.hpp"
#include "sample_report.hpp"

using namespace refaware;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("refaware-store-" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

const AnalysisReport& sample() {
  static const AnalysisReport r = refaware::testing::sample_report("demo/repo", "feature..main");
  return r;
}

ReviewEvent event(EventKind kind, const std::string& at, const std::string& session = "s1",
                  const std::string& id = "p0-r1") {
  return {sample().repo_id, sample().change_set_id, id, kind, at, session};
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIoError;
}

}  // namespace

TEST(FileDocumentStore, StoreThenFetchRoundTrips) {
  TempDir dir;
  FileDocumentStore store(dir.path());
  ReportKey key{sample().repo_id, sample().change_set_id};
  EXPECT_FALSE(store.contains(key));
  EXPECT_TRUE(store.store(sample()));
  EXPECT_TRUE(store.contains(key));
  EXPECT_EQ(canonical_dump(store.fetch(key)), canonical_dump(sample()));
  EXPECT_EQ(*store.fetch_raw(key), canonical_dump(sample()));
  EXPECT_FALSE(store.store(sample()));
}

TEST(FileDocumentStore, KeysBecomeSingleSafePathComponents) {
  EXPECT_EQ(encode_path_component("demo/repo"), "demo%2Frepo");
  EXPECT_EQ(encode_path_component("a..b"), "a..b");
  EXPECT_NE(encode_path_component(".."), "..");
  EXPECT_EQ(encode_path_component(".."), "%2E.");
  TempDir dir;
  FileDocumentStore store(dir.path());
  ReportKey key{sample().repo_id, sample().change_set_id};
  EXPECT_EQ(store.report_path(key).parent_path().parent_path(), dir.path() / "reports");
}

TEST(FileDocumentStore, UnknownKeyIsNotFound) {
  TempDir dir;
  FileDocumentStore store(dir.path());
  EXPECT_EQ(code_of([&] { store.fetch({"ghost", "1"}); }), ErrorCode::kNotFound);
  EXPECT_FALSE(store.fetch_raw({"ghost", "1"}));
}

TEST(FileDocumentStore, LastWriteWinsAndSurvivesRestart) {
  TempDir dir;
  AnalysisReport second = sample();
  second.created_at = "2030-01-01T00:00:00Z";
  {
    FileDocumentStore store(dir.path());
    store.store(sample());
    store.store(second);
  }
  FileDocumentStore reopened(dir.path());
  EXPECT_EQ(reopened.fetch({sample().repo_id, sample().change_set_id}).created_at, "2030-01-01T00:00:00Z");
}

TEST(FileDocumentStore, ConcurrentWritersNeverInterleave) {
  TempDir dir;
  FileDocumentStore store(dir.path());
  AnalysisReport a = sample();
  AnalysisReport b = sample();
  b.created_at = "2031-05-05T05:05:05Z";
  b.pairs.resize(1);
  const std::string text_a = canonical_dump(a), text_b = canonical_dump(b);
  const ReportKey key{a.repo_id, a.change_set_id};
  store.store(a);

  std::atomic<bool> stop{false};
  std::atomic<int> bad{0}, reads{0};
  std::thread reader([&] {
    while (!stop) {
      auto raw = store.fetch_raw(key);
      if (!raw || (*raw != text_a && *raw != text_b)) ++bad;
      ++reads;
    }
  });
  // A second store instance on the same directory: only the atomic rename
  // protects readers from it.
  FileDocumentStore other(dir.path());
  std::thread w1([&] {
    for (int i = 0; i < 40; ++i) store.store(i % 2 ? a : b);
  });
  std::thread w2([&] {
    for (int i = 0; i < 40; ++i) other.store(i % 2 ? b : a);
  });
  w1.join();
  w2.join();
  stop = true;
  reader.join();
  EXPECT_EQ(bad.load(), 0);
  EXPECT_GT(reads.load(), 0);
  auto final_text = *store.fetch_raw(key);
  EXPECT_TRUE(final_text == text_a || final_text == text_b);
  // No temporary files are left behind.
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir.path() / "reports")) files += entry.is_regular_file();
  EXPECT_EQ(files, 1);
}

TEST(FileDocumentStore, EventsAppendInOrder) {
  TempDir dir;
  FileDocumentStore store(dir.path());
  store.store(sample());
  store.record_event(event(EventKind::kRClickLeft, "2026-10-18T10:00:00Z"));
  store.record_event(event(EventKind::kWindowOpen, "2026-10-18T10:00:01Z"));
  store.record_event(event(EventKind::kWindowClose, "2026-10-18T10:00:09.5Z"));
  store.record_event(event(EventKind::kGoToSource, "2026-10-18T09:00:00Z", "other-tab"));
  auto events = store.list_events({sample().repo_id, sample().change_set_id});
  ASSERT_EQ(events.size(), 4u);
  EXPECT_EQ(events[0].event, EventKind::kRClickLeft);
  EXPECT_EQ(events[2].at, "2026-10-18T10:00:09.5Z");
  EXPECT_EQ(events[3].session, "other-tab");
  EXPECT_TRUE(store.list_events({"ghost", "1"}).empty());
}

TEST(FileDocumentStore, EventValidation) {
  TempDir dir;
  FileDocumentStore store(dir.path());
  EXPECT_EQ(code_of([&] { store.record_event(event(EventKind::kWindowOpen, "2026-10-18T10:00:00Z")); }),
            ErrorCode::kNotFound);
  store.store(sample());
  EXPECT_EQ(code_of([&] {
              store.record_event(event(EventKind::kWindowOpen, "2026-10-18T10:00:00Z", "s1", "p7-r7"));
            }),
            ErrorCode::kValidationError);
  store.record_event(event(EventKind::kWindowOpen, "2026-10-18T10:00:05Z"));
  // Time may not run backwards within a session.
  EXPECT_EQ(code_of([&] { store.record_event(event(EventKind::kRClickRight, "2026-10-18T10:00:04Z")); }),
            ErrorCode::kValidationError);
  store.record_event(event(EventKind::kWindowClose, "2026-10-18T10:00:05Z"));
  // Without a session id only the open/close pairing is checked.
  store.record_event(event(EventKind::kWindowOpen, "2026-10-18T11:00:00Z", ""));
  EXPECT_EQ(code_of([&] { store.record_event(event(EventKind::kWindowClose, "2026-10-18T10:59:59Z", "")); }),
            ErrorCode::kValidationError);
  EXPECT_EQ(store.list_events({sample().repo_id, sample().change_set_id}).size(), 3u);
}
