#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixture_repo.hpp"
#include "refaware/document_store.hpp"
#include "refaware/report.hpp"
#include "refaware/subprocess.hpp"
#include "scenarios.hpp"

using namespace refaware;
using nlohmann::json;
using refaware::testing::FixtureRepo;
namespace sc = refaware::testing::scenarios;
namespace fs = std::filesystem;

namespace {

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), REFAWARE_CLI);
  return run_process(args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, AnalyzePrintsACanonicalReport) {
  FixtureRepo repo;
  auto c = sc::move_with_edit(repo);
  ProcessResult r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.head,
                         "--repo-id", "demo", "--change-set", "7"});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  AnalysisReport report = report_from_json(json::parse(r.out));
  EXPECT_EQ(canonical_dump(report), r.out);
  EXPECT_EQ(report.repo_id, "demo");
  ASSERT_EQ(report.pairs.size(), 1u);
  ASSERT_EQ(report.pairs[0].dcc.size(), 1u);
  EXPECT_EQ(report.pairs[0].dcc[0].plain.total, 10);
  EXPECT_EQ(report.pairs[0].dcc[0].enhanced.total, 2);
}

TEST(Cli, ConfigFileAndFlagOverrides) {
  FixtureRepo repo;
  auto c = sc::move_with_edit(repo);
  fs::path cfg = repo.path() / "detector.json";
  std::ofstream(cfg) << R"({"tau_match": 0.95, "min_extract_tokens": 20})";
  ProcessResult r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.head, "--config",
                         cfg.string(), "--tau-extract", "0.75", "--out", (repo.path() / "out.json").string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  json j = json::parse(slurp(repo.path() / "out.json"));
  EXPECT_EQ(j["detector_config"]["tau_match"], 0.95);
  EXPECT_EQ(j["detector_config"]["tau_extract"], 0.75);
  EXPECT_EQ(j["detector_config"]["min_extract_tokens"], 20);
  // The moved body is only ~87% similar, so a 0.95 threshold drops the move.
  EXPECT_TRUE(j["pairs"][0]["refactorings"].empty());
}

TEST(Cli, StoreWritesIntoTheDataDir) {
  FixtureRepo repo;
  auto c = sc::move_with_edit(repo);
  fs::path data = repo.path() / ".data";
  ProcessResult r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.head,
                         "--repo-id", "demo", "--change-set", "7", "--store", "--data-dir", data.string()});
  ASSERT_EQ(r.exit_code, 0) << r.err;
  FileDocumentStore store(data);
  EXPECT_EQ(*store.fetch_raw({"demo", "7"}), r.out);
}

TEST(Cli, FailuresEmitAnErrorDocument) {
  FixtureRepo repo;
  auto c = sc::move_with_edit(repo);
  ProcessResult r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", "nope"});
  EXPECT_EQ(r.exit_code, 2);
  json err = json::parse(r.out)["error"];
  EXPECT_EQ(err["code"], "REVISION_NOT_FOUND");
  EXPECT_NE(r.err.find("nope"), std::string::npos);

  r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.base});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(json::parse(r.out)["error"]["code"], "EMPTY_CHANGE_SET");

  fs::path cfg = repo.path() / "bad.json";
  std::ofstream(cfg) << R"({"tau_matchh": 0.5})";
  r = cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.head, "--config", cfg.string()});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(json::parse(r.out)["error"]["path"], "tau_matchh");
}

TEST(Cli, ReportFormats) {
  FixtureRepo repo;
  auto c = sc::move_then_extract(repo);
  fs::path out = repo.path() / "report.json";
  ASSERT_EQ(cli({"analyze", "--repo", repo.path().string(), "--base", c.base, "--head", c.head, "--out",
                 out.string()})
                .exit_code,
            0);
  ProcessResult table = cli({"report", "--in", out.string(), "--format", "table"});
  ASSERT_EQ(table.exit_code, 0) << table.err;
  EXPECT_NE(table.out.find("Move Function"), std::string::npos);
  EXPECT_NE(table.out.find("method m1() moved"), std::string::npos);
  EXPECT_NE(table.out.find("Extract Function"), std::string::npos);

  ProcessResult html = cli({"report", "--in", out.string(), "--format", "html"});
  ASSERT_EQ(html.exit_code, 0);
  EXPECT_EQ(html.out.rfind("<!DOCTYPE html>", 0), 0u);
  EXPECT_EQ(html.out.find("<script"), std::string::npos);
  EXPECT_NE(html.out.find("isEven"), std::string::npos);

  ProcessResult again = cli({"report", "--in", out.string(), "--format", "json"});
  EXPECT_EQ(again.out, slurp(out));
}
