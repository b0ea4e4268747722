#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace refaware {

enum class ElementKind { kFile, kTypeDecl, kFunction };

std::string to_string(ElementKind kind);
ElementKind element_kind_from_string(const std::string& s);

// Multiset of tokens. Iteration order is the lexicographic token order, so
// every aggregate computed over a bag is deterministic.
class TokenBag {
 public:
  using Counts = std::map<std::string, int, std::less<>>;

  TokenBag() = default;
  explicit TokenBag(Counts counts);

  void add(std::string_view token, int n = 1);
  int count(std::string_view token) const;
  long total() const { return total_; }
  bool empty() const { return total_ == 0; }
  const Counts& counts() const { return counts_; }

  // Multiset difference: max(0, this(t) - other(t)) for every token.
  TokenBag minus(const TokenBag& other) const;

  friend bool operator==(const TokenBag&, const TokenBag&) = default;

 private:
  Counts counts_;
  long total_ = 0;
};

struct Parameter {
  std::string name;  // empty for unnamed parameters
  std::string type;

  friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct Signature {
  std::optional<std::string> receiver;  // receiver type text, e.g. "*Server"
  std::vector<Parameter> parameters;
  std::vector<std::string> results;

  // "(int,string)" built from the parameter types.
  std::string discriminator() const;
  // "(a int, b string) (int, error)"
  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;
};

struct CodeElement {
  ElementKind kind = ElementKind::kFunction;
  std::string name;
  std::string qualified_name;  // <path>::<owner?>::<name>(<param types>)
  std::string container;       // qualified_name of the parent; empty for files
  std::string owner;           // receiver base type for methods, else empty
  std::string file_path;
  int start_line = 1;
  int end_line = 1;
  int body_open_line = 0;  // line of the opening brace of a function body, 0 if none
  std::optional<Signature> signature;
  std::string body_text;  // lines start_line..end_line, verbatim
  TokenBag tokens;        // tokenize(body_text)
  TokenBag block_tokens;  // tokens between a function's body braces

  // "Calc.Sum(int,int)", "Calc", or the file path.
  std::string display_name() const;
};

// Compile-time plugin contract for one analyzed language.
class LanguageAdapter {
 public:
  virtual ~LanguageAdapter() = default;

  virtual std::string_view language() const = 0;
  virtual bool claims(std::string_view path) const = 0;
  // Total: malformed regions are skipped, never fatal.
  virtual std::vector<CodeElement> parse(const std::string& path, std::string_view text) const = 0;
  virtual std::vector<std::string> token_sequence(std::string_view text) const = 0;
  // Throws kKindMismatch for anything but a function.
  virtual Signature signature_of(const CodeElement& element) const = 0;

  TokenBag tokenize(std::string_view text) const;
  // Occurrences of `callee` immediately followed by "(".
  int count_calls(std::string_view text, std::string_view callee) const;
};

// Throws kAdapterMismatch when the adapter does not claim the path.
std::vector<CodeElement> parse_source(const std::string& path, std::string_view text,
                                      const LanguageAdapter& adapter);

class AdapterRegistry {
 public:
  AdapterRegistry() = default;
  void add(std::unique_ptr<LanguageAdapter> adapter);
  const LanguageAdapter* find(std::string_view path) const;

  // Registry holding every adapter shipped with the library.
  static const AdapterRegistry& builtin();

 private:
  std::vector<std::unique_ptr<LanguageAdapter>> adapters_;
};

}  // namespace refaware
