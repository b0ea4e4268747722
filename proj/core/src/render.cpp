#include "refaware/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace refaware {

namespace {

std::string fmt_number(double v) {
  char buf[32];
  if (v == static_cast<long long>(v)) {
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", v);
  }
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

const DCCRecord* find_dcc(const PairResult& p, const std::string& id) {
  for (const auto& d : p.dcc) {
    if (d.refactoring_id == id) return &d;
  }
  return nullptr;
}

std::string html_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string strip_newline(const std::string& s) {
  std::string out = s;
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

std::string anchor_text(const Anchor& a) { return a.file_path + ":" + std::to_string(a.line); }

}  // namespace

std::string render_table(const AnalysisReport& report) {
  std::ostringstream out;
  out << "report " << report.repo_id << " / " << report.change_set_id << " (created " << report.created_at << ")\n";
  for (const auto& p : report.pairs) {
    out << "\n" << p.pair.label.to_string() << "  " << p.pair.before.short_label << ".." << p.pair.after.short_label
        << "  " << p.refactorings.size() << " refactoring(s), " << fmt_number(p.timing.wall_seconds * 1000.0)
        << " ms\n";
    if (p.refactorings.empty()) continue;
    out << "  " << pad("id", 8) << pad("kind", 26) << pad("from", 22) << pad("to", 22) << pad("plain", 7)
        << pad("aligned", 8) << "description\n";
    for (const auto& e : p.refactorings) {
      const auto& r = e.refactoring;
      const DCCRecord* d = find_dcc(p, r.id);
      out << "  " << pad(r.id, 8) << pad(display_name(r.kind), 26) << pad(anchor_text(r.before_anchor), 22)
          << pad(anchor_text(r.after_anchor), 22) << pad(d ? std::to_string(d->plain.total) : "-", 7)
          << pad(d ? std::to_string(d->enhanced.total) : "-", 8) << r.description << "\n";
    }
  }

  const Summary summary = report.summary();
  if (!summary.by_kind.empty()) {
    out << "\nsummary (median [q1, q3])\n";
    out << "  " << pad("kind", 26) << pad("n", 5) << pad("plain DCC", 22) << pad("enhanced DCC", 22)
        << "move distance\n";
    auto dist = [](const std::optional<Distribution>& d) {
      if (!d) return std::string("-");
      return fmt_number(d->median) + " [" + fmt_number(d->q1) + ", " + fmt_number(d->q3) + "]";
    };
    for (const auto& [kind, ks] : summary.by_kind) {
      const std::size_t n = ks.plain_dcc ? ks.plain_dcc->count : ks.move_distance->count;
      out << "  " << pad(display_name(kind), 26) << pad(std::to_string(n), 5) << pad(dist(ks.plain_dcc), 22)
          << pad(dist(ks.enhanced_dcc), 22) << dist(ks.move_distance) << "\n";
    }
  }
  return out.str();
}

std::string render_html(const AnalysisReport& report) {
  std::ostringstream out;
  out << "<!DOCTYPE html>\n<html lang=\"en\">\n<head>\n<meta charset=\"utf-8\">\n<title>"
      << html_escape(report.repo_id + " " + report.change_set_id) << "</title>\n<style>\n"
      << "body{font-family:sans-serif;margin:2em}table{border-collapse:collapse}"
      << "td,th{border:1px solid #ccc;padding:2px 6px;vertical-align:top}"
      << "pre{margin:0;font-family:monospace}.MODIFIED{background:#fff3b0}"
      << ".ADDED{background:#d4f8d4}.REMOVED{background:#fbd4d4}.window{border:1px solid #888;margin:1em 0;padding:.5em}\n"
      << "</style>\n</head>\n<body>\n";
  out << "<h1>" << html_escape(report.repo_id) << " &mdash; " << html_escape(report.change_set_id) << "</h1>\n";
  out << "<p>created " << html_escape(report.created_at) << "</p>\n";

  auto rows_table = [&](const std::vector<DiffRow>& rows) {
    out << "<table>\n";
    for (const auto& row : rows) {
      out << "<tr class=\"" << to_string(row.status) << "\"><td><pre>"
          << html_escape(row.left ? strip_newline(*row.left) : "") << "</pre></td><td><pre>"
          << html_escape(row.right ? strip_newline(*row.right) : "") << "</pre></td></tr>\n";
    }
    out << "</table>\n";
  };

  for (const auto& p : report.pairs) {
    out << "<h2>" << html_escape(p.pair.label.to_string()) << " " << html_escape(p.pair.before.short_label) << ".."
        << html_escape(p.pair.after.short_label) << " (" << p.refactorings.size() << " refactorings)</h2>\n";
    for (const auto& e : p.refactorings) {
      const auto& r = e.refactoring;
      const DCCRecord* d = find_dcc(p, r.id);
      out << "<div class=\"window\" id=\"" << html_escape(r.id) << "\">\n<h3>" << html_escape(display_name(r.kind))
          << " &mdash; " << html_escape(r.description) << " &mdash; " << html_escape(anchor_text(r.before_anchor))
          << " &rarr; " << html_escape(anchor_text(r.after_anchor)) << "</h3>\n";
      if (d) {
        out << "<p>diff code churn: " << d->plain.total << " lines in the plain diff, " << d->enhanced.total
            << " in the aligned view</p>\n";
      }
      if (e.aligned.signature_delta) {
        out << "<p>signature: <code>" << html_escape(e.aligned.signature_delta->before.to_string())
            << "</code> &rarr; <code>" << html_escape(e.aligned.signature_delta->after.to_string()) << "</code></p>\n";
      }
      rows_table(e.aligned.rows);
      if (e.aligned.extracted_body) {
        out << "<h4>" << (r.kind == RefactoringKind::kInlineFunction ? "inlined" : "extracted") << " code</h4>\n";
        rows_table(*e.aligned.extracted_body);
      }
      out << "</div>\n";
    }
  }
  out << "</body>\n</html>\n";
  return out.str();
}

}  // namespace refaware
