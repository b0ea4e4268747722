#include "refaware/go_adapter.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>

#include "refaware/error.hpp"
#include "refaware/text.hpp"

namespace refaware {
namespace go {
namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}
bool is_ident_char(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Multi-byte operators, longest first; anything else lexes as one byte.
constexpr std::array<std::string_view, 25> kOperators = {
    "<<=", ">>=", "&^=", "...", "&&", "||", "<-", "++", "--",
    "==",  "!=",  "<=",  ">=",  ":=", "+=", "-=", "*=", "/=",
    "%=",  "&=",  "|=",  "^=",  "<<", ">>", "&^"};

}  // namespace

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = src.size();
  auto at = [&](std::size_t k) -> unsigned char {
    return k < n ? static_cast<unsigned char>(src[k]) : 0;
  };

  while (i < n) {
    unsigned char c = at(i);
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '/') {
      while (i < n && src[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && at(i + 1) == '*') {
      i += 2;
      while (i < n && !(src[i] == '*' && at(i + 1) == '/')) {
        if (src[i] == '\n') ++line;
        ++i;
      }
      i = std::min(n, i + 2);
      continue;
    }

    const std::size_t begin = i;
    const int start_line = line;
    TokenKind kind = TokenKind::kOperator;

    if (is_ident_start(c)) {
      kind = TokenKind::kIdent;
      while (i < n && is_ident_char(at(i))) ++i;
    } else if (is_digit(c) || (c == '.' && is_digit(at(i + 1)))) {
      kind = TokenKind::kNumber;
      bool hex = c == '0' && (at(i + 1) == 'x' || at(i + 1) == 'X');
      while (i < n) {
        unsigned char d = at(i);
        if (is_ident_char(d) || d == '.') {
          ++i;
        } else if ((d == '+' || d == '-') && i > begin) {
          unsigned char prev = at(i - 1);
          bool exp = hex ? (prev == 'p' || prev == 'P')
                         : (prev == 'e' || prev == 'E' || prev == 'p' || prev == 'P');
          if (!exp) break;
          ++i;
        } else {
          break;
        }
      }
    } else if (c == '"' || c == '\'') {
      kind = TokenKind::kString;
      ++i;
      while (i < n && src[i] != static_cast<char>(c) && src[i] != '\n') {
        if (src[i] == '\\' && i + 1 < n && src[i + 1] != '\n') ++i;
        ++i;
      }
      if (i < n && src[i] == static_cast<char>(c)) ++i;
    } else if (c == '`') {
      kind = TokenKind::kString;
      ++i;
      while (i < n && src[i] != '`') {
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (i < n) ++i;
    } else {
      std::size_t len = 1;
      for (std::string_view op : kOperators) {
        if (src.substr(i, op.size()) == op) {
          len = op.size();
          break;
        }
      }
      i += len;
    }
    out.push_back({kind, src.substr(begin, i - begin), start_line, line, begin, i});
  }
  return out;
}

}  // namespace go

namespace {

using go::Token;
using go::TokenKind;

bool is_open(std::string_view t) { return t == "(" || t == "[" || t == "{"; }
bool is_close(std::string_view t) { return t == ")" || t == "]" || t == "}"; }

// Index of the token closing the group opened at `open`, or nullopt.
std::optional<std::size_t> match_group(const std::vector<Token>& toks, std::size_t open) {
  int depth = 0;
  for (std::size_t k = open; k < toks.size(); ++k) {
    if (is_open(toks[k].text)) {
      ++depth;
    } else if (is_close(toks[k].text)) {
      if (--depth == 0) return k;
    }
  }
  return std::nullopt;
}

// Token texts joined with one space wherever the source had any separation.
std::string span_text(const std::vector<Token>& toks, std::size_t first, std::size_t last) {
  std::string out;
  for (std::size_t k = first; k <= last && k < toks.size(); ++k) {
    if (k > first && toks[k].begin > toks[k - 1].end) out.push_back(' ');
    out.append(toks[k].text);
  }
  return out;
}

bool is_keyword(std::string_view t) {
  static constexpr std::array<std::string_view, 25> kKeywords = {
      "break",  "case",   "chan",   "const", "continue", "default", "defer",
      "else",   "fallthrough", "for", "func",  "go",   "goto",    "if",
      "import", "interface",   "map", "package", "range", "return", "select",
      "struct", "switch", "type",  "var"};
  return std::find(kKeywords.begin(), kKeywords.end(), t) != kKeywords.end();
}

bool is_name(const Token& t) { return t.kind == TokenKind::kIdent && !is_keyword(t.text); }

// Splits the tokens of a parenthesized list (exclusive bounds) on top-level commas.
std::vector<std::pair<std::size_t, std::size_t>> split_list(const std::vector<Token>& toks,
                                                            std::size_t first, std::size_t last) {
  std::vector<std::pair<std::size_t, std::size_t>> parts;
  int depth = 0;
  std::size_t start = first;
  for (std::size_t k = first; k < last; ++k) {
    if (is_open(toks[k].text)) ++depth;
    else if (is_close(toks[k].text)) --depth;
    else if (depth == 0 && toks[k].text == ",") {
      if (k > start) parts.emplace_back(start, k - 1);
      start = k + 1;
    }
  }
  if (last > start) parts.emplace_back(start, last - 1);
  return parts;
}

// A list part "name Type" (as opposed to a bare type such as "pkg.T" or "[]int").
bool part_is_named(const std::vector<Token>& toks, std::size_t a, std::size_t b) {
  if (b <= a || !is_name(toks[a])) return false;
  std::string_view next = toks[a + 1].text;
  if (next == ".") return false;
  if (next == "[") {
    if (a + 2 > b) return false;
    const Token& t = toks[a + 2];
    return t.text == "]" || t.kind == TokenKind::kNumber || t.text == "...";
  }
  return true;
}

std::vector<Parameter> parse_parameters(const std::vector<Token>& toks, std::size_t open,
                                        std::size_t close) {
  auto parts = split_list(toks, open + 1, close);
  bool named = std::any_of(parts.begin(), parts.end(),
                           [&](const auto& p) { return part_is_named(toks, p.first, p.second); });
  std::vector<Parameter> params;
  if (!named) {
    for (const auto& [a, b] : parts) params.push_back({"", span_text(toks, a, b)});
    return params;
  }
  std::vector<std::string> pending;
  for (const auto& [a, b] : parts) {
    if (a == b && is_name(toks[a])) {
      pending.emplace_back(toks[a].text);
      continue;
    }
    std::string type = span_text(toks, a + 1, b);
    for (auto& name : pending) params.push_back({std::move(name), type});
    pending.clear();
    params.push_back({std::string(toks[a].text), type});
  }
  for (auto& name : pending) params.push_back({std::move(name), ""});
  return params;
}

struct FuncHeader {
  Signature signature;
  std::string name;
  std::string owner;
  std::optional<std::size_t> body_open;  // index of "{"
  std::size_t last_header_token = 0;
};

std::string owner_of(std::string receiver_type) {
  while (!receiver_type.empty() && (receiver_type.front() == '*' || receiver_type.front() == ' ')) {
    receiver_type.erase(0, 1);
  }
  auto bracket = receiver_type.find('[');
  if (bracket != std::string::npos) receiver_type.resize(bracket);
  return std::string(text::trim(receiver_type));
}

// Parses "func [(recv)] Name [typeparams] (params) [results]" starting at the
// `func` token. Returns nullopt when the header is malformed.
std::optional<FuncHeader> parse_func_header(const std::vector<Token>& toks, std::size_t func_at) {
  FuncHeader h;
  std::size_t j = func_at + 1;
  if (j < toks.size() && toks[j].text == "(") {
    auto close = match_group(toks, j);
    if (!close) return std::nullopt;
    auto parts = split_list(toks, j + 1, *close);
    if (!parts.empty()) {
      auto [a, b] = parts.front();
      std::size_t type_first = part_is_named(toks, a, b) ? a + 1 : a;
      h.signature.receiver = span_text(toks, type_first, b);
      h.owner = owner_of(*h.signature.receiver);
    }
    j = *close + 1;
  }
  if (j >= toks.size() || !is_name(toks[j])) return std::nullopt;
  h.name = std::string(toks[j].text);
  ++j;
  if (j < toks.size() && toks[j].text == "[") {
    auto close = match_group(toks, j);
    if (!close) return std::nullopt;
    j = *close + 1;
  }
  if (j >= toks.size() || toks[j].text != "(") return std::nullopt;
  auto params_close = match_group(toks, j);
  if (!params_close) return std::nullopt;
  h.signature.parameters = parse_parameters(toks, j, *params_close);
  h.last_header_token = *params_close;

  // Results run until the body brace, or until a line break ends a body-less
  // declaration. struct{...} and interface{...} braces belong to the type.
  std::size_t k = *params_close + 1;
  std::size_t results_first = k;
  while (k < toks.size()) {
    const Token& t = toks[k];
    if (t.line > toks[k - 1].end_line && t.text != "{") break;
    if (t.text == "{") {
      bool type_brace = k > 0 && (toks[k - 1].text == "struct" || toks[k - 1].text == "interface");
      if (!type_brace) {
        h.body_open = k;
        break;
      }
    }
    if (is_open(t.text)) {
      auto close = match_group(toks, k);
      if (!close) return std::nullopt;
      k = *close + 1;
      continue;
    }
    if (is_close(t.text) || t.text == ";") break;
    ++k;
  }
  if (k > results_first) {
    std::size_t last = k - 1;
    h.last_header_token = last;
    if (toks[results_first].text == "(" && match_group(toks, results_first) == last) {
      for (const auto& p : parse_parameters(toks, results_first, last)) {
        h.signature.results.push_back(p.type);
      }
    } else {
      h.signature.results.push_back(span_text(toks, results_first, last));
    }
  }
  return h;
}

// Last token index of a type spec starting at `k` (the spec's first type
// token): runs until a line break or ';' at bracket depth zero.
std::optional<std::size_t> type_spec_end(const std::vector<Token>& toks, std::size_t k,
                                         std::size_t limit) {
  std::size_t last = k;
  while (k < limit) {
    const Token& t = toks[k];
    if (k > last && t.line > toks[last].end_line) break;
    if (t.text == ";" || is_close(t.text)) break;
    if (is_open(t.text)) {
      auto close = match_group(toks, k);
      if (!close || *close >= limit) return std::nullopt;
      last = *close;
      k = *close + 1;
      continue;
    }
    last = k;
    ++k;
  }
  return last;
}

TokenBag bag_of(const std::vector<Token>& toks, std::size_t first, std::size_t last_exclusive) {
  TokenBag bag;
  for (std::size_t k = first; k < last_exclusive; ++k) bag.add(toks[k].text);
  return bag;
}

}  // namespace

bool GoAdapter::claims(std::string_view path) const {
  return path.size() > 3 && path.substr(path.size() - 3) == ".go";
}

std::vector<std::string> GoAdapter::token_sequence(std::string_view text) const {
  std::vector<std::string> out;
  for (const auto& t : go::lex(text)) out.emplace_back(t.text);
  return out;
}

std::vector<CodeElement> GoAdapter::parse(const std::string& path, std::string_view source) const {
  const auto toks = go::lex(source);
  std::vector<CodeElement> elements;

  CodeElement file;
  file.kind = ElementKind::kFile;
  file.name = path;
  file.qualified_name = path;
  file.file_path = path;
  file.start_line = 1;
  file.end_line = std::max(1, text::line_count(source));
  file.body_text = std::string(source);
  file.tokens = tokenize(source);
  file.block_tokens = file.tokens;

  std::map<std::string, int> seen_names;
  auto finish = [&](CodeElement e) {
    e.container = path;
    e.file_path = path;
    e.body_text = text::slice_lines(source, e.start_line, e.end_line);
    e.tokens = tokenize(e.body_text);
    int& n = seen_names[e.qualified_name];
    if (++n > 1) e.qualified_name += "#" + std::to_string(n);
    elements.push_back(std::move(e));
  };

  // A declaration keyword counts only when it starts a top-level statement.
  auto starts_statement = [&](std::size_t k) {
    return k == 0 || toks[k].line > toks[k - 1].end_line || toks[k - 1].text == ";";
  };

  int depth = 0;
  std::size_t k = 0;
  while (k < toks.size()) {
    const Token& t = toks[k];
    if (depth == 0 && t.text == "func" && starts_statement(k)) {
      auto header = parse_func_header(toks, k);
      if (!header) {
        ++k;
        continue;
      }
      CodeElement e;
      e.kind = ElementKind::kFunction;
      e.name = header->name;
      e.owner = header->owner;
      e.signature = header->signature;
      e.start_line = t.line;
      std::size_t last = header->last_header_token;
      if (header->body_open) {
        auto close = match_group(toks, *header->body_open);
        if (!close) break;  // unterminated body: the rest of the file is malformed
        last = *close;
        e.body_open_line = toks[*header->body_open].line;
        e.block_tokens = bag_of(toks, *header->body_open + 1, *close);
      }
      e.end_line = toks[last].end_line;
      std::string prefix = path + "::" + (e.owner.empty() ? "" : e.owner + "::");
      e.qualified_name = prefix + e.name + e.signature->discriminator();
      finish(std::move(e));
      k = last + 1;
      continue;
    }
    if (depth == 0 && t.text == "type" && starts_statement(k)) {
      std::size_t j = k + 1;
      std::size_t group_end = toks.size();
      bool grouped = j < toks.size() && toks[j].text == "(";
      if (grouped) {
        auto close = match_group(toks, j);
        if (!close) break;
        group_end = *close;
        ++j;
      }
      std::size_t resume = grouped ? group_end + 1 : j;
      while (j < group_end) {
        if (toks[j].text == ";") {
          ++j;
          continue;
        }
        if (!is_name(toks[j]) || j + 1 >= group_end) break;
        std::size_t name_at = j;
        auto end = type_spec_end(toks, j + 1, group_end);
        if (!end) break;
        CodeElement e;
        e.kind = ElementKind::kTypeDecl;
        e.name = std::string(toks[name_at].text);
        e.qualified_name = path + "::" + e.name;
        e.start_line = grouped ? toks[name_at].line : t.line;
        e.end_line = toks[*end].end_line;
        e.block_tokens = bag_of(toks, name_at, *end + 1);
        finish(std::move(e));
        j = *end + 1;
        if (!grouped) {
          resume = j;
          break;
        }
      }
      k = std::max(resume, k + 1);
      continue;
    }
    if (is_open(t.text) && t.text == "{") ++depth;
    if (t.text == "}") depth = std::max(0, depth - 1);
    ++k;
  }

  std::stable_sort(elements.begin(), elements.end(), [](const CodeElement& a, const CodeElement& b) {
    return a.start_line < b.start_line;
  });
  elements.insert(elements.begin(), std::move(file));
  return elements;
}

Signature GoAdapter::signature_of(const CodeElement& element) const {
  if (element.kind != ElementKind::kFunction) {
    throw Error(ErrorCode::kKindMismatch,
                "signature_of expects a function, got " + to_string(element.kind));
  }
  const auto toks = go::lex(element.body_text);
  for (std::size_t k = 0; k < toks.size(); ++k) {
    if (toks[k].text != "func") continue;
    if (auto header = parse_func_header(toks, k)) return header->signature;
  }
  throw Error(ErrorCode::kKindMismatch, "no function header in " + element.qualified_name);
}

}  // namespace refaware
