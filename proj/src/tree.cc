#include "cqarank/tree.h"

#include <cctype>
#include <fstream>
#include <utility>

namespace cqarank {

TreeParseError::TreeParseError(const std::string& what, std::size_t offset)
    : DataError(what + " at byte " + std::to_string(offset)), offset_(offset) {}

SyntaxTree::SyntaxTree(std::string label) : SyntaxTree(std::move(label), {}) {}

SyntaxTree::SyntaxTree(std::string label, std::vector<SyntaxTree> children)
    : label_(std::move(label)), children_(std::move(children)) {
  if (label_.empty()) throw DataError("tree label must be non-empty");
}

bool SyntaxTree::is_preterminal() const {
  return children_.size() == 1 && children_[0].is_leaf();
}

void SyntaxTree::set_label(std::string label) {
  if (label.empty()) throw DataError("tree label must be non-empty");
  label_ = std::move(label);
}

namespace {

void CollectYield(const SyntaxTree& t, std::vector<std::string>& out) {
  if (t.is_leaf()) {
    out.push_back(t.label());
    return;
  }
  for (const auto& c : t.children()) CollectYield(c, out);
}

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  SyntaxTree ReadTop() {
    SkipSpace();
    if (pos_ >= text_.size()) throw TreeParseError("empty input", pos_);
    SyntaxTree tree = text_[pos_] == '(' ? ReadNode() : SyntaxTree(ReadToken());
    SkipSpace();
    if (pos_ != text_.size()) throw TreeParseError("trailing garbage", pos_);
    return tree;
  }

 private:
  static bool IsDelim(char c) {
    return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c));
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string ReadToken() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && !IsDelim(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Precondition: text_[pos_] == '('.
  SyntaxTree ReadNode() {
    const std::size_t open = pos_++;
    SkipSpace();
    if (pos_ >= text_.size()) throw TreeParseError("unbalanced parentheses", pos_);
    if (IsDelim(text_[pos_])) throw TreeParseError("empty label", pos_);
    std::string label = ReadToken();
    std::vector<SyntaxTree> children;
    for (;;) {
      SkipSpace();
      if (pos_ >= text_.size()) throw TreeParseError("unbalanced parentheses", pos_);
      const char c = text_[pos_];
      if (c == ')') {
        ++pos_;
        break;
      }
      if (c == '(') {
        children.push_back(ReadNode());
      } else {
        children.emplace_back(ReadToken());
      }
    }
    if (children.empty()) throw TreeParseError("node without children", open);
    return SyntaxTree(std::move(label), std::move(children));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void WriteBracketed(const SyntaxTree& t, std::string& out) {
  if (t.is_leaf()) {
    out += t.label();
    return;
  }
  out += '(';
  out += t.label();
  for (const auto& c : t.children()) {
    out += ' ';
    WriteBracketed(c, out);
  }
  out += ')';
}

}  // namespace

std::vector<std::string> SyntaxTree::Yield() const {
  std::vector<std::string> out;
  CollectYield(*this, out);
  return out;
}

SyntaxTree ParseBracketed(std::string_view text) { return BracketReader(text).ReadTop(); }

std::string ToBracketed(const SyntaxTree& tree) {
  std::string out;
  WriteBracketed(tree, out);
  return out;
}

SyntaxTree MacroTree(const std::vector<SyntaxTree>& sentence_trees, std::string_view root_label) {
  if (sentence_trees.empty()) throw DataError("macro-tree needs at least one sentence tree");
  return SyntaxTree(std::string(root_label), sentence_trees);
}

std::size_t NodeCount(const SyntaxTree& tree) {
  std::size_t n = 1;
  for (const auto& c : tree.children()) n += NodeCount(c);
  return n;
}

std::vector<SyntaxTree> ReadTreeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tree file " + path);
  std::vector<SyntaxTree> trees;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      trees.push_back(ParseBracketed(line));
    } catch (const TreeParseError& e) {
      throw DataError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return trees;
}

}  // namespace cqarank
