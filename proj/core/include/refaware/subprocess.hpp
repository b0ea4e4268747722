#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace refaware {

struct ProcessResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs argv[0] (looked up on PATH) with the given arguments and working
// directory, capturing stdout and stderr. No shell is involved.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::filesystem::path& cwd = {});

}  // namespace refaware
