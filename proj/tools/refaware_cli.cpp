// refaware: refactoring-aware diff analysis and review service.
//
//   refaware analyze --repo <path> --base <rev> --head <rev> [--commits <rev>...]
//                    [--config <file>] [--out <file>] [--store]
//   refaware serve   --port <n> --data-dir <path>
//   refaware report  --in <file> --format {json,table,html}

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "refaware/analyzer.hpp"
#include "refaware/document_store.hpp"
#include "refaware/error.hpp"
#include "refaware/render.hpp"
#include "refaware/report.hpp"
#include "refaware/rest_api.hpp"

namespace {

using refaware::Error;
using refaware::ErrorCode;

// Failures leave a JSON error document on stdout and a nonzero exit status.
int fail(const std::exception& e) {
  nlohmann::json err = {{"code", "INTERNAL"}, {"message", e.what()}};
  if (const auto* ref = dynamic_cast<const Error*>(&e)) {
    err["code"] = std::string(refaware::to_string(ref->code()));
    if (!ref->path().empty()) err["path"] = ref->path();
  }
  std::cout << refaware::canonical_dump(nlohmann::json{{"error", err}});
  std::cerr << "refaware: " << e.what() << "\n";
  return 2;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  out << text;
}

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::kIoError, "cannot read " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

httplib::Server* g_server = nullptr;

void handle_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Refactoring-aware diff analysis and review service"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Detect refactorings in a change set and emit a report");
  refaware::AnalyzeRequest request;
  std::string repo_path = ".";
  std::string config_file, out_file, data_dir = "refaware-data";
  bool store = false, sequential = false;
  std::optional<double> tau_match, tau_extract, idf_smoothing;
  std::optional<int> min_extract_tokens;
  analyze->add_option("--repo", repo_path, "Path to the git repository")->required();
  analyze->add_option("--base", request.base, "Integration target revision")->required();
  analyze->add_option("--head", request.head, "Last revision of the change set");
  analyze->add_option("--commits", request.commits, "Explicit commit list, oldest first");
  analyze->add_option("--config", config_file, "Detector config file (JSON)");
  analyze->add_option("--out", out_file, "Write the report here instead of stdout");
  analyze->add_flag("--store", store, "Also persist the report in the document store");
  analyze->add_option("--data-dir", data_dir, "Document store directory used with --store");
  analyze->add_option("--repo-id", request.repo_id, "Repository id (default: directory name)");
  analyze->add_option("--change-set", request.change_set_id, "Change set id (default: <base>..<head>)");
  analyze->add_option("--tau-match", tau_match, "Override tau_match");
  analyze->add_option("--tau-extract", tau_extract, "Override tau_extract");
  analyze->add_option("--min-extract-tokens", min_extract_tokens, "Override min_extract_tokens");
  analyze->add_option("--idf-smoothing", idf_smoothing, "Override idf_smoothing");
  analyze->add_flag("--sequential", sequential, "Analyze revision pairs one at a time");

  // serve
  auto* serve = app.add_subcommand("serve", "Serve stored reports and review events over REST");
  int port = 8080;
  std::string host = "127.0.0.1";
  std::string ui_dir;
  std::string serve_dir = "refaware-data";
  serve->add_option("--port", port, "TCP port")->required();
  serve->add_option("--data-dir", serve_dir, "Document store directory")->required();
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--ui-dir", ui_dir, "Static review UI served at /");

  // report
  auto* report_cmd = app.add_subcommand("report", "Render a stored report");
  std::string in_file, format = "table", report_out;
  report_cmd->add_option("--in", in_file, "Report file (- for stdin)")->required();
  report_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "table", "html"}));
  report_cmd->add_option("--out", report_out, "Write here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) {
      if (request.head.empty() && request.commits.empty()) {
        throw Error(ErrorCode::kValidationError, "either --head or --commits is required", "head");
      }
      request.repo_path = repo_path;
      if (!config_file.empty()) request.config = refaware::DetectorConfig::load(config_file);
      if (tau_match) request.config.tau_match = *tau_match;
      if (tau_extract) request.config.tau_extract = *tau_extract;
      if (min_extract_tokens) request.config.min_extract_tokens = *min_extract_tokens;
      if (idf_smoothing) request.config.idf_smoothing = *idf_smoothing;
      request.parallel = !sequential;

      refaware::AnalysisReport report = refaware::analyze(request);
      if (store) refaware::FileDocumentStore(data_dir).store(report);
      write_output(out_file, refaware::canonical_dump(report));
      return 0;
    }

    if (serve->parsed()) {
      refaware::FileDocumentStore documents(serve_dir);
      refaware::RestApi api(documents);
      httplib::Server server;
      std::optional<std::filesystem::path> static_dir;
      if (!ui_dir.empty()) static_dir = ui_dir;
      api.mount(server, static_dir);
      g_server = &server;
      std::signal(SIGINT, handle_signal);
      std::signal(SIGTERM, handle_signal);
      std::cerr << "refaware: serving " << serve_dir << " on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) throw Error(ErrorCode::kIoError, "cannot listen on port " + std::to_string(port));
      return 0;
    }

    if (report_cmd->parsed()) {
      refaware::AnalysisReport report = refaware::report_from_json(refaware::parse_json(read_input(in_file)));
      std::string text = format == "json"    ? refaware::canonical_dump(report)
                         : format == "html" ? refaware::render_html(report)
                                            : refaware::render_table(report);
      write_output(report_out, text);
      return 0;
    }
  } catch (const std::exception& e) {
    return fail(e);
  }
  return 0;
}
