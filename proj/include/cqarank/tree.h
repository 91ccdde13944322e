#ifndef CQARANK_TREE_H_
#define CQARANK_TREE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cqarank/error.h"

namespace cqarank {

// Thrown by ParseBracketed; offset() is the byte position of the problem.
class TreeParseError : public DataError {
 public:
  TreeParseError(const std::string& what, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Ordered labeled tree. Internal nodes carry constituent or POS labels,
// leaves carry surface tokens. Trees are plain values: copying a tree
// copies all of its nodes.
class SyntaxTree {
 public:
  explicit SyntaxTree(std::string label);
  SyntaxTree(std::string label, std::vector<SyntaxTree> children);

  const std::string& label() const { return label_; }
  const std::vector<SyntaxTree>& children() const { return children_; }
  const SyntaxTree& child(std::size_t i) const { return children_.at(i); }
  std::size_t num_children() const { return children_.size(); }
  bool is_leaf() const { return children_.empty(); }
  // A node whose single child is a leaf.
  bool is_preterminal() const;

  void set_label(std::string label);
  std::vector<SyntaxTree>& mutable_children() { return children_; }

  // Leaf tokens, left to right.
  std::vector<std::string> Yield() const;

  friend bool operator==(const SyntaxTree& a, const SyntaxTree& b) = default;

 private:
  std::string label_;
  std::vector<SyntaxTree> children_;
};

inline constexpr std::string_view kDefaultRootLabel = "ROOT";

// Reads one Penn-Treebank-style bracketed expression, e.g.
// "(S (NP (PRP I)) (VP (VBP go)))". Whitespace between tokens is ignored.
// Labels and tokens are taken verbatim (no -LRB-/-RRB- unescaping).
SyntaxTree ParseBracketed(std::string_view text);

// Canonical single-space form; inverse of ParseBracketed.
std::string ToBracketed(const SyntaxTree& tree);

// Joins sentence parses under a fake root. A single sentence still gets
// the root so that every question has the same shape.
SyntaxTree MacroTree(const std::vector<SyntaxTree>& sentence_trees,
                     std::string_view root_label = kDefaultRootLabel);

std::size_t NodeCount(const SyntaxTree& tree);

// One bracketed tree per non-empty line.
std::vector<SyntaxTree> ReadTreeFile(const std::string& path);

}  // namespace cqarank

#endif  // CQARANK_TREE_H_
