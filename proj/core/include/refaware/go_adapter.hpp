#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "refaware/source_model.hpp"

namespace refaware {

namespace go {

enum class TokenKind { kIdent, kNumber, kString, kOperator };

struct Token {
  TokenKind kind;
  std::string_view text;
  int line;           // 1-based line of the first byte
  int end_line;       // line of the last byte (raw strings may span lines)
  std::size_t begin;  // byte offsets into the lexed text
  std::size_t end;
};

// Lexes Go source; comments and whitespace are dropped. String, raw-string
// and rune literals come back as single tokens including their quotes.
std::vector<Token> lex(std::string_view text);

}  // namespace go

// Declaration-level scanner for Go: package-level functions, methods and type
// specs. Function literals stay inside their enclosing function.
class GoAdapter final : public LanguageAdapter {
 public:
  std::string_view language() const override { return "go"; }
  bool claims(std::string_view path) const override;
  std::vector<CodeElement> parse(const std::string& path, std::string_view text) const override;
  std::vector<std::string> token_sequence(std::string_view text) const override;
  Signature signature_of(const CodeElement& element) const override;
};

}  // namespace refaware
