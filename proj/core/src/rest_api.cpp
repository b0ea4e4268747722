#include "refaware/rest_api.hpp"

#include "httplib.h"
#include "refaware/error.hpp"

namespace refaware {

using nlohmann::json;

ApiResponse error_response(const std::exception& e) {
  int status = 500;
  json err = {{"code", "INTERNAL"}, {"message", e.what()}};
  if (const auto* ref = dynamic_cast<const Error*>(&e)) {
    err["code"] = std::string(to_string(ref->code()));
    if (!ref->path().empty()) err["path"] = ref->path();
    switch (ref->code()) {
      case ErrorCode::kNotFound: status = 404; break;
      case ErrorCode::kValidationError: status = 400; break;
      default: status = 500; break;
    }
  }
  return {status, canonical_dump(json{{"error", err}})};
}

namespace {

template <typename Fn>
ApiResponse guarded(Fn fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    return error_response(e);
  }
}

bool revision_matches(const RevisionRef& r, const std::string& query) {
  if (query.empty()) return false;
  if (query == r.id || query == r.short_label) return true;
  return query.size() >= 4 && r.id.rfind(query, 0) == 0;
}

json pair_refactorings(const PairResult& p) {
  json refs = json::array();
  for (const auto& e : p.refactorings) {
    json r = to_json(e.refactoring);
    r["aligned_diff"] = to_json(e.aligned);
    refs.push_back(std::move(r));
  }
  return {{"pair", {{"before", p.pair.before.id}, {"after", p.pair.after.id}, {"label", p.pair.label.to_string()}}},
          {"refactorings", refs}};
}

}  // namespace

ApiResponse RestApi::put_report(const std::string& repo, const std::string& change_set, const std::string& body) {
  return guarded([&] {
    AnalysisReport report = report_from_json(parse_json(body));
    if (report.repo_id != repo) {
      throw Error(ErrorCode::kValidationError, "repo_id does not match the request path", "repo_id");
    }
    if (report.change_set_id != change_set) {
      throw Error(ErrorCode::kValidationError, "change_set_id does not match the request path", "change_set_id");
    }
    bool created = store_.store(report);
    return ApiResponse{created ? 201 : 200,
                       canonical_dump(json{{"repo_id", repo}, {"change_set_id", change_set}, {"created", created}})};
  });
}

ApiResponse RestApi::get_report(const std::string& repo, const std::string& change_set) const {
  return guarded([&] { return ApiResponse{200, canonical_dump(store_.fetch({repo, change_set}))}; });
}

ApiResponse RestApi::get_refactorings(const std::string& repo, const std::string& change_set,
                                      const std::optional<std::string>& pair) const {
  return guarded([&] {
    AnalysisReport report = store_.fetch({repo, change_set});
    json pairs = json::array();
    if (pair) {
      auto sep = pair->find("..");
      if (sep == std::string::npos) {
        throw Error(ErrorCode::kValidationError, "pair must look like <before>..<after>", "pair");
      }
      std::string before = pair->substr(0, sep);
      std::string after = pair->substr(sep + 2);
      for (const auto& p : report.pairs) {
        if (revision_matches(p.pair.before, before) && revision_matches(p.pair.after, after)) {
          pairs.push_back(pair_refactorings(p));
        }
      }
      if (pairs.empty()) throw Error(ErrorCode::kNotFound, "no pair " + *pair + " in this report");
    } else {
      for (const auto& p : report.pairs) pairs.push_back(pair_refactorings(p));
    }
    return ApiResponse{200, canonical_dump(json{{"pairs", pairs}})};
  });
}

ApiResponse RestApi::post_event(const std::string& body) {
  return guarded([&] {
    ReviewEvent ev = event_from_json(parse_json(body));
    store_.record_event(ev);
    return ApiResponse{201, canonical_dump(to_json(ev))};
  });
}

ApiResponse RestApi::get_events(const std::string& repo, const std::string& change_set) const {
  return guarded([&] {
    if (!store_.contains({repo, change_set})) {
      throw Error(ErrorCode::kNotFound, "no report for " + repo + "/" + change_set);
    }
    json events = json::array();
    for (const auto& e : store_.list_events({repo, change_set})) events.push_back(to_json(e));
    return ApiResponse{200, canonical_dump(json{{"events", events}})};
  });
}

void RestApi::mount(httplib::Server& server, const std::optional<std::filesystem::path>& static_dir) {
  auto reply = [](httplib::Response& res, const ApiResponse& api) {
    res.status = api.status;
    res.set_content(api.body, "application/json; charset=utf-8");
  };
  const std::string segment = "([^/]+)";
  const std::string reports = "/api/v1/reports/" + segment + "/" + segment;

  server.Put(reports, [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, put_report(req.matches[1], req.matches[2], req.body));
  });
  server.Get(reports, [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, get_report(req.matches[1], req.matches[2]));
  });
  server.Get(reports + "/refactorings", [this, reply](const httplib::Request& req, httplib::Response& res) {
    std::optional<std::string> pair;
    if (req.has_param("pair")) pair = req.get_param_value("pair");
    reply(res, get_refactorings(req.matches[1], req.matches[2], pair));
  });
  server.Post("/api/v1/events", [this, reply](const httplib::Request& req, httplib::Response& res) {
    reply(res, post_event(req.body));
  });
  server.Get("/api/v1/events/" + segment + "/" + segment,
             [this, reply](const httplib::Request& req, httplib::Response& res) {
               reply(res, get_events(req.matches[1], req.matches[2]));
             });
  if (static_dir) server.set_mount_point("/", static_dir->string());
}

}  // namespace refaware
