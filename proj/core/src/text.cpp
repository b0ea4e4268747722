#include "refaware/text.hpp"

#include <chrono>
#include <ctime>

namespace refaware::text {

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, nl - start + 1));
    start = nl + 1;
  }
  return lines;
}

std::string join_lines(std::span<const std::string> lines) {
  std::size_t total = 0;
  for (const auto& l : lines) total += l.size();
  std::string out;
  out.reserve(total);
  for (const auto& l : lines) out += l;
  return out;
}

int line_count(std::string_view text) {
  int n = 0;
  for (char c : text) n += (c == '\n');
  if (text.empty() || text.back() != '\n') ++n;
  return n;
}

std::string slice_lines(std::string_view text, int first, int last) {
  std::size_t pos = 0;
  int line = 1;
  while (line < first && pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) return {};
    pos = nl + 1;
    ++line;
  }
  std::size_t begin = pos;
  while (line <= last && pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    ++line;
  }
  return std::string(text.substr(begin, pos - begin));
}

std::string decode_utf8_lossy(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(bytes[k]); };
  while (i < bytes.size()) {
    unsigned char c = byte(i);
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    std::size_t len = 0;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c >= 0xC2 && c <= 0xDF) {
      len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
      len = 3;
      if (c == 0xE0) lo = 0xA0;
      if (c == 0xED) hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
      len = 4;
      if (c == 0xF0) lo = 0x90;
      if (c == 0xF4) hi = 0x8F;
    }
    if (len == 0) {
      out += kReplacement;
      ++i;
      continue;
    }
    // Maximal-subpart replacement: consume the valid prefix of the sequence.
    std::size_t k = 1;
    bool ok = true;
    for (; k < len; ++k) {
      if (i + k >= bytes.size()) { ok = false; break; }
      unsigned char b = byte(i + k);
      unsigned char min = (k == 1) ? lo : 0x80;
      unsigned char max = (k == 1) ? hi : 0xBF;
      if (b < min || b > max) { ok = false; break; }
    }
    if (ok) {
      out.append(bytes.substr(i, len));
      i += len;
    } else {
      out += kReplacement;
      i += k;
    }
  }
  return out;
}

bool looks_binary(std::string_view bytes) {
  return bytes.substr(0, 8000).find('\0') != std::string_view::npos;
}

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::string_view strip_eol(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string utc_timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace refaware::text
