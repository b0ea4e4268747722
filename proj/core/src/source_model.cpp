#include "refaware/source_model.hpp"

#include "refaware/error.hpp"
#include "refaware/go_adapter.hpp"

namespace refaware {

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::kFile: return "FILE";
    case ElementKind::kTypeDecl: return "TYPE_DECL";
    case ElementKind::kFunction: return "FUNCTION";
  }
  return "FUNCTION";
}

ElementKind element_kind_from_string(const std::string& s) {
  if (s == "FILE") return ElementKind::kFile;
  if (s == "TYPE_DECL") return ElementKind::kTypeDecl;
  if (s == "FUNCTION") return ElementKind::kFunction;
  throw Error(ErrorCode::kValidationError, "invalid element kind '" + s + "'");
}

TokenBag::TokenBag(Counts counts) : counts_(std::move(counts)) {
  for (auto it = counts_.begin(); it != counts_.end();) {
    if (it->second <= 0) {
      it = counts_.erase(it);
    } else {
      total_ += it->second;
      ++it;
    }
  }
}

void TokenBag::add(std::string_view token, int n) {
  if (n <= 0) return;
  auto it = counts_.find(token);
  if (it == counts_.end()) {
    counts_.emplace(std::string(token), n);
  } else {
    it->second += n;
  }
  total_ += n;
}

int TokenBag::count(std::string_view token) const {
  auto it = counts_.find(token);
  return it == counts_.end() ? 0 : it->second;
}

TokenBag TokenBag::minus(const TokenBag& other) const {
  TokenBag out;
  for (const auto& [tok, n] : counts_) {
    int rest = n - other.count(tok);
    if (rest > 0) out.add(tok, rest);
  }
  return out;
}

std::string Signature::discriminator() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (i) out += ",";
    out += parameters[i].type;
  }
  return out + ")";
}

std::string Signature::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parameters.size(); ++i) {
    if (i) out += ", ";
    out += parameters[i].name.empty() ? parameters[i].type
                                      : parameters[i].name + " " + parameters[i].type;
  }
  out += ")";
  if (results.size() == 1) {
    out += " " + results.front();
  } else if (results.size() > 1) {
    out += " (";
    for (std::size_t i = 0; i < results.size(); ++i) out += (i ? ", " : "") + results[i];
    out += ")";
  }
  return out;
}

std::string CodeElement::display_name() const {
  switch (kind) {
    case ElementKind::kFile: return file_path;
    case ElementKind::kTypeDecl: return name;
    case ElementKind::kFunction: {
      std::string s = owner.empty() ? name : owner + "." + name;
      return s + (signature ? signature->discriminator() : "()");
    }
  }
  return name;
}

TokenBag LanguageAdapter::tokenize(std::string_view text) const {
  TokenBag bag;
  for (const auto& t : token_sequence(text)) bag.add(t);
  return bag;
}

int LanguageAdapter::count_calls(std::string_view text, std::string_view callee) const {
  auto toks = token_sequence(text);
  int n = 0;
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    if (toks[i] == callee && toks[i + 1] == "(") ++n;
  }
  return n;
}

std::vector<CodeElement> parse_source(const std::string& path, std::string_view text,
                                      const LanguageAdapter& adapter) {
  if (!adapter.claims(path)) {
    throw Error(ErrorCode::kAdapterMismatch,
                std::string(adapter.language()) + " adapter does not handle '" + path + "'");
  }
  return adapter.parse(path, text);
}

void AdapterRegistry::add(std::unique_ptr<LanguageAdapter> adapter) {
  adapters_.push_back(std::move(adapter));
}

const LanguageAdapter* AdapterRegistry::find(std::string_view path) const {
  for (const auto& a : adapters_) {
    if (a->claims(path)) return a.get();
  }
  return nullptr;
}

const AdapterRegistry& AdapterRegistry::builtin() {
  static const AdapterRegistry registry = [] {
    AdapterRegistry r;
    r.add(std::make_unique<GoAdapter>());
    return r;
  }();
  return registry;
}

}  // namespace refaware
