#ifndef CQARANK_REL_LINK_H_
#define CQARANK_REL_LINK_H_

#include <set>
#include <string>
#include <string_view>

#include "cqarank/text.h"
#include "cqarank/tree.h"

namespace cqarank {

inline constexpr std::string_view kRelPrefix = "REL-";

struct RelConfig {
  std::set<std::string> phrase_labels = {"NP", "VP", "PP"};
  bool match_case_insensitive = true;
  // Compared after case folding when match_case_insensitive is set.
  StopwordSet stopwords;
  int min_shared_tokens = 1;

  void Validate() const;
};

// Returns a copy of `x` where every phrase node (label in phrase_labels)
// whose yield shares at least min_shared_tokens distinct non-stopword
// tokens with the whole yield of `y` is relabeled "REL-<label>".
// Asymmetric: only x's nodes are marked. Throws DataError if either
// tree already carries a REL- label.
SyntaxTree RelLink(const SyntaxTree& x, const SyntaxTree& y, const RelConfig& cfg = {});

bool HasRelTag(const SyntaxTree& tree);

}  // namespace cqarank

#endif  // CQARANK_REL_LINK_H_
