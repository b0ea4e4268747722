#include "refaware/repo_reader.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "refaware/error.hpp"
#include "refaware/subprocess.hpp"
#include "refaware/text.hpp"

namespace refaware {

std::string PairLabel::to_string() const {
  return kind == Kind::kMain ? std::string("MAIN") : "COMMIT " + std::to_string(index);
}

PairLabel PairLabel::parse(const std::string& s) {
  if (s == "MAIN") return main();
  if (s.rfind("COMMIT ", 0) == 0) {
    try {
      std::size_t used = 0;
      int i = std::stoi(s.substr(7), &used);
      if (i >= 1 && used == s.size() - 7) return commit(i);
    } catch (const std::exception&) {
    }
  }
  throw Error(ErrorCode::kValidationError, "invalid pair label '" + s + "'");
}

std::string to_string(FileStatus s) {
  switch (s) {
    case FileStatus::kAdded: return "ADDED";
    case FileStatus::kDeleted: return "DELETED";
    case FileStatus::kModified: return "MODIFIED";
    case FileStatus::kRenamed: return "RENAMED";
  }
  return "MODIFIED";
}

FileStatus file_status_from_string(const std::string& s) {
  if (s == "ADDED") return FileStatus::kAdded;
  if (s == "DELETED") return FileStatus::kDeleted;
  if (s == "MODIFIED") return FileStatus::kModified;
  if (s == "RENAMED") return FileStatus::kRenamed;
  throw Error(ErrorCode::kValidationError, "invalid file status '" + s + "'");
}

std::vector<RevisionPair> enumerate_pairs(const RevisionRef& base,
                                          const std::vector<RevisionRef>& commits) {
  if (commits.empty()) throw Error(ErrorCode::kEmptyChangeSet, "change set has no commits");

  std::vector<RevisionPair> candidates;
  candidates.push_back({base, commits.back(), PairLabel::main()});
  for (std::size_t i = commits.size(); i >= 1; --i) {
    const RevisionRef& before = (i == 1) ? base : commits[i - 2];
    candidates.push_back({before, commits[i - 1], PairLabel::commit(static_cast<int>(i))});
  }

  std::vector<RevisionPair> pairs;
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& c : candidates) {
    if (seen.insert({c.before.id, c.after.id}).second) pairs.push_back(std::move(c));
  }
  return pairs;
}

GitRepository::GitRepository(std::filesystem::path root) : root_(std::move(root)) {}

std::string GitRepository::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv{"git", "-c", "core.quotepath=off", "-C", root_.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessResult r = run_process(argv);
  if (r.exit_code != 0) {
    std::string cmd;
    for (const auto& a : args) cmd += (cmd.empty() ? "" : " ") + a;
    throw Error(ErrorCode::kGitFailure, "git " + cmd + " failed: " + std::string(text::trim(r.err)));
  }
  return std::move(r.out);
}

RevisionRef GitRepository::resolve(const std::string& rev) const {
  if (rev.empty() || rev.front() == '-') {
    throw Error(ErrorCode::kRevisionNotFound, "revision '" + rev + "' not found");
  }
  ProcessResult r = run_process({"git", "-C", root_.string(), "rev-parse", "--verify", "--quiet",
                                 "--end-of-options", rev + "^{commit}"});
  std::string id(text::trim(r.out));
  if (r.exit_code != 0 || id.empty()) {
    throw Error(ErrorCode::kRevisionNotFound, "revision '" + rev + "' not found in " + root_.string());
  }
  // Symbolic names read better in the UI; raw hashes are shortened.
  return {id, rev == id ? id.substr(0, 7) : rev};
}

std::vector<RevisionRef> GitRepository::commits_between(const RevisionRef& base,
                                                        const RevisionRef& head) const {
  std::string out = git({"rev-list", "--reverse", "--first-parent", base.id + ".." + head.id});
  std::vector<RevisionRef> commits;
  for (const auto& line : text::split_lines(out)) {
    std::string id(text::trim(line));
    if (!id.empty()) commits.push_back({id, id.substr(0, 7)});
  }
  return commits;
}

std::optional<std::string> GitRepository::read_blob(const std::string& id,
                                                    const std::string& path) const {
  ProcessResult r = run_process({"git", "-C", root_.string(), "cat-file", "blob", id + ":" + path});
  if (r.exit_code != 0) return std::nullopt;
  return std::move(r.out);
}

std::string GitRepository::read_file(const RevisionRef& rev, const std::string& path) const {
  RevisionRef resolved = resolve(rev.id);
  auto blob = read_blob(resolved.id, path);
  if (!blob) {
    throw Error(ErrorCode::kFileNotFound, "'" + path + "' does not exist at " + rev.short_label);
  }
  return text::decode_utf8_lossy(*blob);
}

std::vector<FileChange> GitRepository::changed_files(const RevisionPair& pair) const {
  RevisionRef before = resolve(pair.before.id);
  RevisionRef after = resolve(pair.after.id);
  // -M without a value keeps git's default rename similarity threshold.
  std::string raw = git({"diff-tree", "-r", "-z", "-M", "--no-commit-id", "--no-ext-diff",
                         before.id, after.id});

  // Records: ":<mode> <mode> <sha> <sha> <status>\0<path>\0[<path>\0]"
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (pos < raw.size()) {
    std::size_t nul = raw.find('\0', pos);
    if (nul == std::string::npos) nul = raw.size();
    fields.push_back(raw.substr(pos, nul - pos));
    pos = nul + 1;
  }

  std::vector<FileChange> changes;
  for (std::size_t i = 0; i < fields.size();) {
    const std::string& meta = fields[i++];
    if (meta.empty() || meta.front() != ':') continue;
    char status = meta.back();
    std::size_t sp = meta.rfind(' ');
    if (sp != std::string::npos) status = meta[sp + 1];

    FileChange fc;
    if (status == 'R' || status == 'C') {
      if (i + 1 >= fields.size()) break;
      fc.path_before = fields.at(i++);
      fc.path_after = fields.at(i++);
      fc.status = status == 'R' ? FileStatus::kRenamed : FileStatus::kAdded;
      if (status == 'C') fc.path_before.reset();
    } else {
      std::string path = fields.at(i++);
      switch (status) {
        case 'A': fc.status = FileStatus::kAdded; fc.path_after = path; break;
        case 'D': fc.status = FileStatus::kDeleted; fc.path_before = path; break;
        default: fc.status = FileStatus::kModified; fc.path_before = fc.path_after = path; break;
      }
    }

    std::optional<std::string> raw_before, raw_after;
    if (fc.path_before) raw_before = read_blob(before.id, *fc.path_before);
    if (fc.path_after) raw_after = read_blob(after.id, *fc.path_after);
    fc.binary = (raw_before && text::looks_binary(*raw_before)) ||
                (raw_after && text::looks_binary(*raw_after));
    if (!fc.binary) {
      if (raw_before) fc.content_before = text::decode_utf8_lossy(*raw_before);
      if (raw_after) fc.content_after = text::decode_utf8_lossy(*raw_after);
    }
    changes.push_back(std::move(fc));
  }

  std::sort(changes.begin(), changes.end(), [](const FileChange& a, const FileChange& b) {
    return a.path() < b.path();
  });
  return changes;
}

}  // namespace refaware
