#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace refaware::text {

// Splits into lines, each keeping its '\n' terminator (a final line without
// one is kept as-is). Joining the result reproduces the input exactly.
std::vector<std::string> split_lines(std::string_view text);
std::string join_lines(std::span<const std::string> lines);

// Number of lines as an editor would show them; "" has one (empty) line.
int line_count(std::string_view text);

// Lines first..last (1-based, inclusive), terminators kept.
std::string slice_lines(std::string_view text, int first, int last);

// Decodes bytes as UTF-8, replacing each invalid sequence with U+FFFD.
std::string decode_utf8_lossy(std::string_view bytes);

// True if the bytes look binary: a NUL in the first 8000 bytes.
bool looks_binary(std::string_view bytes);

std::string_view trim(std::string_view s);
std::string_view strip_eol(std::string_view line);

// Collapses runs of whitespace into a single space and trims both ends.
std::string collapse_whitespace(std::string_view s);

std::string utc_timestamp_now();

}  // namespace refaware::text
