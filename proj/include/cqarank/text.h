#ifndef CQARANK_TEXT_H_
#define CQARANK_TEXT_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace cqarank {

using StopwordSet = std::unordered_set<std::string>;

// Case-folded, stopword-free tokens. Never contains empty strings.
struct TokenSeq {
  std::vector<std::string> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  friend bool operator==(const TokenSeq&, const TokenSeq&) = default;
};

// Unicode full case folding of a UTF-8 string. Invalid byte sequences are
// copied through unchanged.
std::string FoldCase(std::string_view utf8);

// Splits on every code point that is neither a letter nor a digit
// (combining marks stay attached to their word), case-folds, and drops
// stopwords. Stopwords are matched after folding.
TokenSeq Tokenize(std::string_view utf8, const StopwordSet& stopwords = {});

// One token per line, folded. Blank lines and lines starting with '#'
// are skipped.
StopwordSet LoadStopwords(const std::string& path);

}  // namespace cqarank

#endif  // CQARANK_TEXT_H_
