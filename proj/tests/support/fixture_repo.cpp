#include "fixture_repo.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <stdexcept>

#include <unistd.h>

#include "refaware/subprocess.hpp"
#include "refaware/text.hpp"

namespace refaware::testing {

namespace fs = std::filesystem;

FixtureRepo::FixtureRepo() {
  static std::atomic<int> counter{0};
  std::random_device rd;
  root_ = fs::temp_directory_path() /
          ("refaware-fixture-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" +
           std::to_string(rd() % 100000));
  fs::create_directories(root_);
  git({"init", "-q"});
  git({"config", "user.name", "Fixture Author"});
  git({"config", "user.email", "fixture@example.com"});
  git({"config", "core.autocrlf", "false"});
  git({"config", "commit.gpgsign", "false"});
}

FixtureRepo::~FixtureRepo() {
  std::error_code ec;
  fs::remove_all(root_, ec);
}

void FixtureRepo::write(const std::string& rel, const std::string& content) {
  fs::path p = root_ / rel;
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

void FixtureRepo::remove(const std::string& rel) { fs::remove(root_ / rel); }

std::string FixtureRepo::commit(const std::string& message) {
  git({"add", "-A"});
  git({"commit", "-q", "--allow-empty", "-m", message});
  return std::string(text::trim(git({"rev-parse", "HEAD"})));
}

std::string FixtureRepo::git(const std::vector<std::string>& args) const {
  std::vector<std::string> argv{"git", "-C", root_.string()};
  argv.insert(argv.end(), args.begin(), args.end());
  ProcessResult r = run_process(argv);
  if (r.exit_code != 0) throw std::runtime_error("git failed: " + r.err);
  return r.out;
}

}  // namespace refaware::testing
