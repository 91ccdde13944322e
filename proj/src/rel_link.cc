#include "cqarank/rel_link.h"

#include <unordered_set>

namespace cqarank {

void RelConfig::Validate() const {
  if (phrase_labels.empty()) throw ConfigError("rel: phrase_labels must be non-empty");
  if (min_shared_tokens < 1) throw ConfigError("rel: min_shared_tokens must be >= 1");
}

bool HasRelTag(const SyntaxTree& tree) {
  if (tree.label().starts_with(kRelPrefix)) return true;
  for (const auto& c : tree.children())
    if (HasRelTag(c)) return true;
  return false;
}

namespace {

using TokenSet = std::unordered_set<std::string>;

class Linker {
 public:
  Linker(const RelConfig& cfg, TokenSet other) : cfg_(cfg), other_(std::move(other)) {}

  std::string Normalize(const std::string& token) const {
    return cfg_.match_case_insensitive ? FoldCase(token) : token;
  }

  bool Keep(const std::string& normalized) const { return !cfg_.stopwords.contains(normalized); }

  // Relabels in place; returns the set of shared tokens under `node`.
  TokenSet Mark(SyntaxTree& node) const {
    TokenSet shared;
    if (node.is_leaf()) {
      std::string tok = Normalize(node.label());
      if (Keep(tok) && other_.contains(tok)) shared.insert(std::move(tok));
      return shared;
    }
    for (auto& c : node.mutable_children()) {
      TokenSet sub = Mark(c);
      shared.insert(sub.begin(), sub.end());
    }
    if (cfg_.phrase_labels.contains(node.label()) &&
        shared.size() >= static_cast<std::size_t>(cfg_.min_shared_tokens)) {
      node.set_label(std::string(kRelPrefix) + node.label());
    }
    return shared;
  }

 private:
  const RelConfig& cfg_;
  TokenSet other_;
};

}  // namespace

SyntaxTree RelLink(const SyntaxTree& x, const SyntaxTree& y, const RelConfig& cfg) {
  cfg.Validate();
  if (HasRelTag(x) || HasRelTag(y))
    throw DataError("rel_link: input tree already contains a REL- label");
  Linker probe(cfg, {});
  TokenSet vocab;
  for (const auto& tok : y.Yield()) {
    std::string n = probe.Normalize(tok);
    if (probe.Keep(n)) vocab.insert(std::move(n));
  }
  SyntaxTree out = x;
  Linker(cfg, std::move(vocab)).Mark(out);
  return out;
}

}  // namespace cqarank
