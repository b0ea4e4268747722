#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "refaware/document_store.hpp"

namespace httplib {
class Server;
}

namespace refaware {

struct ApiResponse {
  int status = 200;
  std::string body;  // canonical JSON document
};

// REST surface over a DocumentStore:
//   PUT  /api/v1/reports/{repo}/{change_set}
//   GET  /api/v1/reports/{repo}/{change_set}
//   GET  /api/v1/reports/{repo}/{change_set}/refactorings?pair=<before>..<after>
//   POST /api/v1/events
//   GET  /api/v1/events/{repo}/{change_set}
// Handlers are plain functions so they can be exercised without a socket.
class RestApi {
 public:
  explicit RestApi(DocumentStore& store) : store_(store) {}

  ApiResponse put_report(const std::string& repo, const std::string& change_set, const std::string& body);
  ApiResponse get_report(const std::string& repo, const std::string& change_set) const;
  ApiResponse get_refactorings(const std::string& repo, const std::string& change_set,
                               const std::optional<std::string>& pair) const;
  ApiResponse post_event(const std::string& body);
  ApiResponse get_events(const std::string& repo, const std::string& change_set) const;

  // Registers the routes; `static_dir`, when given, is served at "/".
  void mount(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir = {});

 private:
  DocumentStore& store_;
};

// Maps a library error onto an HTTP status and an error document.
ApiResponse error_response(const std::exception& e);

}  // namespace refaware
