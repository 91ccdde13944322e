#include "cqarank/text.h"

#include <unicode/uchar.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>
#include <unicode/utf8.h>

#include <fstream>

#include "cqarank/error.h"

namespace cqarank {
namespace {

void AppendUtf8(UChar32 c, std::string& out) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Full folding can expand one code point into several (ß -> ss).
void AppendFolded(UChar32 c, std::string& out) {
  UChar src[2] = {0, 0};
  int32_t src_len = 0;
  UBool error = false;
  U16_APPEND(src, src_len, 2, c, error);
  UChar dst[8];
  UErrorCode status = U_ZERO_ERROR;
  const int32_t n = u_strFoldCase(dst, 8, src, src_len, U_FOLD_CASE_DEFAULT, &status);
  if (error || U_FAILURE(status)) {
    AppendUtf8(u_foldCase(c, U_FOLD_CASE_DEFAULT), out);
    return;
  }
  for (int32_t k = 0; k < n;) {
    UChar32 f;
    U16_NEXT(dst, k, n, f);
    AppendUtf8(f, out);
  }
}

bool IsWordChar(UChar32 c) {
  if (u_isalpha(c) || u_isdigit(c)) return true;
  const int8_t type = u_charType(c);
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

}  // namespace

std::string FoldCase(std::string_view utf8) {
  std::string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) {
      out.append(utf8.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
      continue;
    }
    AppendFolded(c, out);
  }
  return out;
}

TokenSeq Tokenize(std::string_view utf8, const StopwordSet& stopwords) {
  TokenSeq seq;
  std::string current;
  auto flush = [&] {
    if (!current.empty() && !stopwords.contains(current)) seq.tokens.push_back(current);
    current.clear();
  };
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0 && IsWordChar(c)) {
      AppendFolded(c, current);
    } else {
      flush();
    }
  }
  flush();
  return seq;
}

StopwordSet LoadStopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file " + path);
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    words.insert(FoldCase(std::string_view(line).substr(b, e - b + 1)));
  }
  return words;
}

}  // namespace cqarank
