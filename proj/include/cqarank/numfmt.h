#ifndef CQARANK_NUMFMT_H_
#define CQARANK_NUMFMT_H_

#include <charconv>
#include <optional>
#include <string>
#include <string_view>

namespace cqarank {

// Shortest text that parses back to exactly `v`.
inline std::string FormatDouble(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

inline std::optional<double> ParseDouble(std::string_view s) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::optional<long long> ParseInt(std::string_view s) {
  long long v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace cqarank

#endif  // CQARANK_NUMFMT_H_
