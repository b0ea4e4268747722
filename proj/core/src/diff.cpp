#include "refaware/diff.hpp"

#include <algorithm>
#include <set>

#include "refaware/error.hpp"
#include "refaware/text.hpp"

namespace refaware {

std::vector<Edit> edit_script(std::span<const std::string> a, std::span<const std::string> b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  int prefix = 0;
  while (prefix < n && prefix < m && a[prefix] == b[prefix]) ++prefix;
  int suffix = 0;
  while (suffix < n - prefix && suffix < m - prefix && a[n - 1 - suffix] == b[m - 1 - suffix]) ++suffix;

  const int N = n - prefix - suffix;
  const int M = m - prefix - suffix;
  auto A = [&](int i) -> const std::string& { return a[prefix + i]; };
  auto B = [&](int j) -> const std::string& { return b[prefix + j]; };

  // Forward greedy pass; trace[d] holds the furthest-reaching x for every
  // diagonal k in [-d, d] after round d (index k + d).
  std::vector<std::vector<int>> trace;
  if (N > 0 || M > 0) {
    std::vector<int> prev;  // round d-1, index k + (d-1)
    for (int d = 0; d <= N + M; ++d) {
      std::vector<int> cur(2 * d + 1);
      bool done = false;
      for (int k = -d; k <= d; k += 2) {
        auto prev_at = [&](int kk) { return prev[kk + d - 1]; };
        int x;
        if (d == 0) {
          x = 0;
        } else if (k == -d || (k != d && prev_at(k - 1) < prev_at(k + 1))) {
          x = prev_at(k + 1);
        } else {
          x = prev_at(k - 1) + 1;
        }
        int y = x - k;
        while (x < N && y < M && A(x) == B(y)) {
          ++x;
          ++y;
        }
        cur[k + d] = x;
        if (x >= N && y >= M) done = true;
      }
      trace.push_back(cur);
      prev = std::move(cur);
      if (done) break;
    }
  }

  // Backtrack from (N, M) to collect the middle section in reverse.
  std::vector<Edit> middle;
  int x = N, y = M;
  for (int d = static_cast<int>(trace.size()) - 1; d > 0; --d) {
    const auto& V = trace[d - 1];
    auto at = [&](int kk) { return V[kk + d - 1]; };
    int k = x - y;
    bool down = (k == -d || (k != d && at(k - 1) < at(k + 1)));
    int prev_k = down ? k + 1 : k - 1;
    int prev_x = at(prev_k);
    int prev_y = prev_x - prev_k;
    int mid_x = down ? prev_x : prev_x + 1;
    int mid_y = mid_x - k;
    while (x > mid_x && y > mid_y) {
      --x;
      --y;
      middle.push_back({EditOp::kKeep, prefix + x, prefix + y});
    }
    if (down) {
      middle.push_back({EditOp::kInsert, prefix + x, prefix + prev_y});
    } else {
      middle.push_back({EditOp::kDelete, prefix + prev_x, prefix + y});
    }
    x = prev_x;
    y = prev_y;
  }
  while (x > 0 && y > 0) {
    --x;
    --y;
    middle.push_back({EditOp::kKeep, prefix + x, prefix + y});
  }

  std::vector<Edit> script;
  script.reserve(prefix + middle.size() + suffix);
  for (int i = 0; i < prefix; ++i) script.push_back({EditOp::kKeep, i, i});
  script.insert(script.end(), middle.rbegin(), middle.rend());
  for (int i = 0; i < suffix; ++i) script.push_back({EditOp::kKeep, n - suffix + i, m - suffix + i});

  // Within each change block, list deletions before insertions.
  for (std::size_t i = 0; i < script.size();) {
    if (script[i].op == EditOp::kKeep) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < script.size() && script[j].op != EditOp::kKeep) ++j;
    std::stable_partition(script.begin() + static_cast<std::ptrdiff_t>(i),
                          script.begin() + static_cast<std::ptrdiff_t>(j),
                          [](const Edit& e) { return e.op == EditOp::kDelete; });
    i = j;
  }
  return script;
}

std::vector<Hunk> line_diff(std::span<const std::string> before, std::span<const std::string> after) {
  const auto script = edit_script(before, after);
  std::vector<Hunk> hunks;
  int consumed_before = 0;  // lines of `before` passed so far
  int consumed_after = 0;
  for (std::size_t i = 0; i < script.size();) {
    if (script[i].op == EditOp::kKeep) {
      ++consumed_before;
      ++consumed_after;
      ++i;
      continue;
    }
    Hunk h;
    h.before_start = consumed_before;
    h.after_start = consumed_after;
    for (; i < script.size() && script[i].op != EditOp::kKeep; ++i) {
      if (script[i].op == EditOp::kDelete) {
        h.deleted_lines.push_back(before[script[i].before_index]);
      } else {
        h.added_lines.push_back(after[script[i].after_index]);
      }
    }
    h.before_len = static_cast<int>(h.deleted_lines.size());
    h.after_len = static_cast<int>(h.added_lines.size());
    if (h.before_len > 0) ++h.before_start;
    if (h.after_len > 0) ++h.after_start;
    consumed_before += h.before_len;
    consumed_after += h.after_len;
    hunks.push_back(std::move(h));
  }
  return hunks;
}

std::vector<Hunk> line_diff(std::string_view before_text, std::string_view after_text) {
  const auto a = text::split_lines(before_text);
  const auto b = text::split_lines(after_text);
  return line_diff(a, b);
}

std::string apply_hunks(std::string_view before_text, std::span<const Hunk> hunks) {
  const auto lines = text::split_lines(before_text);
  std::string out;
  std::size_t next = 0;  // 0-based index of the next unconsumed before line
  for (const Hunk& h : hunks) {
    // Index of the first line this hunk touches (or inserts before).
    std::size_t first = h.before_len > 0 ? static_cast<std::size_t>(h.before_start - 1)
                                         : static_cast<std::size_t>(h.before_start);
    if (first < next || first > lines.size() || first + h.deleted_lines.size() > lines.size() ||
        static_cast<int>(h.deleted_lines.size()) != h.before_len ||
        static_cast<int>(h.added_lines.size()) != h.after_len) {
      throw Error(ErrorCode::kValidationError, "hunk does not apply");
    }
    for (; next < first; ++next) out += lines[next];
    for (const auto& d : h.deleted_lines) {
      if (lines[next] != d) throw Error(ErrorCode::kValidationError, "hunk context mismatch");
      ++next;
    }
    for (const auto& a : h.added_lines) out += a;
  }
  for (; next < lines.size(); ++next) out += lines[next];
  return out;
}

FileDiff diff_file(const FileChange& change) {
  FileDiff d;
  d.path_before = change.path_before;
  d.path_after = change.path_after;
  d.status = change.status;
  d.binary = change.binary;
  if (!change.binary) {
    d.hunks = line_diff(change.content_before.value_or(""), change.content_after.value_or(""));
  }
  return d;
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::kUnchanged: return "UNCHANGED";
    case RowStatus::kModified: return "MODIFIED";
    case RowStatus::kAdded: return "ADDED";
    case RowStatus::kRemoved: return "REMOVED";
  }
  return "UNCHANGED";
}

RowStatus row_status_from_string(const std::string& s) {
  if (s == "UNCHANGED") return RowStatus::kUnchanged;
  if (s == "MODIFIED") return RowStatus::kModified;
  if (s == "ADDED") return RowStatus::kAdded;
  if (s == "REMOVED") return RowStatus::kRemoved;
  throw Error(ErrorCode::kValidationError, "invalid row status '" + s + "'");
}

namespace {

// Rows for `before` vs `after`, comparing lines through `key` but showing
// them verbatim.
template <typename KeyFn>
std::vector<DiffRow> align_by(std::span<const std::string> before, std::span<const std::string> after,
                              KeyFn key) {
  std::vector<std::string> kb, ka;
  kb.reserve(before.size());
  ka.reserve(after.size());
  for (const auto& l : before) kb.push_back(key(l));
  for (const auto& l : after) ka.push_back(key(l));
  const auto script = edit_script(kb, ka);

  std::vector<DiffRow> rows;
  for (std::size_t i = 0; i < script.size();) {
    if (script[i].op == EditOp::kKeep) {
      const auto& e = script[i];
      rows.push_back({before[e.before_index], after[e.after_index], RowStatus::kUnchanged});
      ++i;
      continue;
    }
    std::vector<int> dels, ins;
    for (; i < script.size() && script[i].op != EditOp::kKeep; ++i) {
      if (script[i].op == EditOp::kDelete) {
        dels.push_back(script[i].before_index);
      } else {
        ins.push_back(script[i].after_index);
      }
    }
    std::size_t paired = std::min(dels.size(), ins.size());
    for (std::size_t p = 0; p < paired; ++p) {
      // Lines equal under the key but not verbatim still count as modified.
      rows.push_back({before[dels[p]], after[ins[p]], RowStatus::kModified});
    }
    for (std::size_t p = paired; p < dels.size(); ++p) {
      rows.push_back({before[dels[p]], std::nullopt, RowStatus::kRemoved});
    }
    for (std::size_t p = paired; p < ins.size(); ++p) {
      rows.push_back({std::nullopt, after[ins[p]], RowStatus::kAdded});
    }
  }
  return rows;
}

// Extracted (or inlined) function lines against the source function's lost
// (or gained) lines. Matching ignores indentation since moved code is
// typically re-indented; the declaration and closing lines frame the rows.
// `moved_on_right` selects which side holds the function.
std::vector<DiffRow> align_moved_body(const ElementSnapshot& fn, const std::vector<std::string>& region,
                                      bool moved_on_right) {
  const auto lines = text::split_lines(fn.body_text);
  std::size_t header = lines.size();
  if (fn.body_open_line >= fn.start_line) {
    header = std::min(lines.size(), static_cast<std::size_t>(fn.body_open_line - fn.start_line + 1));
  }
  std::size_t footer = (header < lines.size()) ? 1 : 0;
  std::span<const std::string> all(lines);
  auto inner = all.subspan(header, lines.size() - header - footer);

  auto key = [](const std::string& l) { return std::string(text::trim(l)); };
  std::vector<DiffRow> rows;
  for (std::size_t i = 0; i < header; ++i) rows.push_back({lines[i], lines[i], RowStatus::kUnchanged});
  auto body = moved_on_right ? align_by(region, inner, key) : align_by(inner, region, key);
  // Whitespace-only differences are not edits of the moved code.
  for (auto& row : body) {
    if (row.status == RowStatus::kModified && key(*row.left) == key(*row.right)) {
      row.status = RowStatus::kUnchanged;
    }
  }
  rows.insert(rows.end(), body.begin(), body.end());
  for (std::size_t i = lines.size() - footer; i < lines.size(); ++i) {
    rows.push_back({lines[i], lines[i], RowStatus::kUnchanged});
  }
  return rows;
}

}  // namespace

std::vector<DiffRow> align_lines(std::span<const std::string> before, std::span<const std::string> after) {
  return align_by(before, after, [](const std::string& l) -> const std::string& { return l; });
}

AlignedDiff align_refactoring(const Refactoring& r) {
  if (!r.before_element || !r.after_element) {
    throw Error(ErrorCode::kMissingBody, "refactoring " + r.id + " carries no element bodies");
  }
  const bool composition =
      r.kind == RefactoringKind::kExtractFunction || r.kind == RefactoringKind::kInlineFunction;
  if (composition && !r.counterpart_element) {
    throw Error(ErrorCode::kMissingBody, "refactoring " + r.id + " lacks the source function body");
  }

  AlignedDiff out;
  if (r.kind == RefactoringKind::kExtractFunction) {
    const auto before = text::split_lines(r.before_element->body_text);
    const auto after = text::split_lines(r.counterpart_element->body_text);
    out.rows = align_lines(before, after);
    std::vector<std::string> lost;
    for (const auto& row : out.rows) {
      if (row.status == RowStatus::kRemoved || row.status == RowStatus::kModified) lost.push_back(*row.left);
    }
    out.extracted_body = align_moved_body(*r.after_element, lost, /*moved_on_right=*/true);
  } else if (r.kind == RefactoringKind::kInlineFunction) {
    const auto before = text::split_lines(r.counterpart_element->body_text);
    const auto after = text::split_lines(r.after_element->body_text);
    out.rows = align_lines(before, after);
    std::vector<std::string> gained;
    for (const auto& row : out.rows) {
      if (row.status == RowStatus::kAdded || row.status == RowStatus::kModified) gained.push_back(*row.right);
    }
    out.extracted_body = align_moved_body(*r.before_element, gained, /*moved_on_right=*/false);
  } else {
    const auto before = text::split_lines(r.before_element->body_text);
    const auto after = text::split_lines(r.after_element->body_text);
    out.rows = align_lines(before, after);
  }

  const auto& sb = r.before_element->signature;
  const auto& sa = r.after_element->signature;
  const bool signature_kind =
      r.kind == RefactoringKind::kChangeSignature || r.kind == RefactoringKind::kRenameFunction;
  if (!composition && sb && sa && (signature_kind || *sb != *sa)) {
    out.signature_delta = SignatureDelta{*sb, *sa};
  }
  return out;
}

ChurnCount make_churn(int added, int deleted) { return {added, deleted, added + deleted}; }

ChurnCount plain_churn(std::span<const Hunk> hunks) {
  int added = 0, deleted = 0;
  for (const auto& h : hunks) {
    added += h.after_len;
    deleted += h.before_len;
  }
  return make_churn(added, deleted);
}

ChurnCount plain_churn(std::span<const FileDiff> diffs, const Refactoring& r) {
  struct Span {
    std::string file;
    int first;
    int last;
  };
  std::vector<Span> before_spans, after_spans;
  auto add = [](std::vector<Span>& spans, const std::optional<ElementSnapshot>& e) {
    if (e) spans.push_back({e->file_path, e->start_line, e->end_line});
  };
  add(before_spans, r.before_element);
  add(after_spans, r.after_element);
  if (r.kind == RefactoringKind::kExtractFunction) add(after_spans, r.counterpart_element);
  if (r.kind == RefactoringKind::kInlineFunction) add(before_spans, r.counterpart_element);

  auto inside = [](const std::vector<Span>& spans, const std::string& file, int line) {
    return std::any_of(spans.begin(), spans.end(), [&](const Span& s) {
      return s.file == file && line >= s.first && line <= s.last;
    });
  };

  std::set<std::pair<std::string, int>> deleted, added;
  for (const auto& d : diffs) {
    for (const auto& h : d.hunks) {
      if (d.path_before) {
        for (int i = 0; i < h.before_len; ++i) {
          if (inside(before_spans, *d.path_before, h.before_start + i)) {
            deleted.insert({*d.path_before, h.before_start + i});
          }
        }
      }
      if (d.path_after) {
        for (int i = 0; i < h.after_len; ++i) {
          if (inside(after_spans, *d.path_after, h.after_start + i)) {
            added.insert({*d.path_after, h.after_start + i});
          }
        }
      }
    }
  }
  return make_churn(static_cast<int>(added.size()), static_cast<int>(deleted.size()));
}

ChurnCount enhanced_churn(const AlignedDiff& aligned) {
  int added = 0, deleted = 0;
  auto count = [&](const std::vector<DiffRow>& rows) {
    for (const auto& row : rows) {
      switch (row.status) {
        case RowStatus::kModified: ++added; ++deleted; break;
        case RowStatus::kAdded: ++added; break;
        case RowStatus::kRemoved: ++deleted; break;
        case RowStatus::kUnchanged: break;
      }
    }
  };
  count(aligned.rows);
  if (aligned.extracted_body) count(*aligned.extracted_body);
  return make_churn(added, deleted);
}

}  // namespace refaware
