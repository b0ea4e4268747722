#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace refaware {

struct RevisionRef {
  std::string id;           // full commit hash once resolved
  std::string short_label;  // what the user typed, or an abbreviated hash

  friend bool operator==(const RevisionRef& a, const RevisionRef& b) { return a.id == b.id; }
};

// MAIN compares the last commit against the integration base; COMMIT(i)
// compares commit i against its predecessor (commit 1 against the base).
struct PairLabel {
  enum class Kind { kMain, kCommit };
  Kind kind = Kind::kMain;
  int index = 0;  // 1-based for kCommit, 0 for kMain

  static PairLabel main() { return {Kind::kMain, 0}; }
  static PairLabel commit(int i) { return {Kind::kCommit, i}; }

  std::string to_string() const;  // "MAIN" or "COMMIT 3"
  static PairLabel parse(const std::string& s);

  friend bool operator==(const PairLabel&, const PairLabel&) = default;
};

struct RevisionPair {
  RevisionRef before;
  RevisionRef after;
  PairLabel label;
};

enum class FileStatus { kAdded, kDeleted, kModified, kRenamed };

std::string to_string(FileStatus s);
FileStatus file_status_from_string(const std::string& s);

struct FileChange {
  std::optional<std::string> path_before;
  std::optional<std::string> path_after;
  FileStatus status = FileStatus::kModified;
  std::optional<std::string> content_before;
  std::optional<std::string> content_after;
  bool binary = false;

  // path_after when present, else path_before.
  const std::string& path() const { return path_after ? *path_after : *path_before; }
};

// MAIN first, then COMMIT n..1; pairs repeating an earlier (before, after)
// are dropped. Throws kEmptyChangeSet for an empty commit list.
std::vector<RevisionPair> enumerate_pairs(const RevisionRef& base,
                                          const std::vector<RevisionRef>& commits);

// Read-only view of a local git repository, driven through the `git`
// executable's plumbing commands. Each call spawns its own process, so a
// const GitRepository may be shared between threads.
class GitRepository {
 public:
  explicit GitRepository(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  // Resolves any revision expression to a commit; throws kRevisionNotFound.
  RevisionRef resolve(const std::string& rev) const;

  // Commits in base..head, oldest first, following first parents only.
  std::vector<RevisionRef> commits_between(const RevisionRef& base, const RevisionRef& head) const;

  // Sorted by path; rename detection uses git's default similarity threshold.
  std::vector<FileChange> changed_files(const RevisionPair& pair) const;

  // Throws kFileNotFound when the path does not exist at the revision.
  std::string read_file(const RevisionRef& rev, const std::string& path) const;

 private:
  std::string git(const std::vector<std::string>& args) const;
  std::optional<std::string> read_blob(const std::string& id, const std::string& path) const;

  std::filesystem::path root_;
};

}  // namespace refaware
