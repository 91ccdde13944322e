#include "cqarank/mte.h"

#include <algorithm>
#include <cmath>
#include <map>

#include "cqarank/error.h"
#include "cqarank/similarity.h"

namespace cqarank {
namespace {

std::size_t ClippedMatches(const std::map<Gram, int>& hyp, const std::map<Gram, int>& ref) {
  std::size_t m = 0;
  for (const auto& [g, c] : hyp)
    if (auto it = ref.find(g); it != ref.end()) m += static_cast<std::size_t>(std::min(c, it->second));
  return m;
}

std::size_t NgramCount(std::size_t len, int n) {
  return len >= static_cast<std::size_t>(n) ? len - static_cast<std::size_t>(n) + 1 : 0;
}

}  // namespace

std::size_t UnigramMatches(const TokenSeq& hyp, const TokenSeq& ref) {
  return ClippedMatches(AsCounts(Ngrams(hyp, 1)), AsCounts(Ngrams(ref, 1)));
}

double SentenceBleu(const TokenSeq& hyp, const TokenSeq& ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    const auto matches = static_cast<double>(ClippedMatches(AsCounts(Ngrams(hyp, n)), AsCounts(Ngrams(ref, n))));
    const auto total = static_cast<double>(NgramCount(hyp.size(), n));
    double precision;
    if (n == 1) {
      if (matches == 0.0) return 0.0;
      precision = matches / total;
    } else {
      precision = (matches + 1.0) / (total + 1.0);
    }
    log_sum += std::log(precision);
  }
  const auto c = static_cast<double>(hyp.size()), r = static_cast<double>(ref.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return bp * std::exp(log_sum / 4.0);
}

double TerNoShift(const TokenSeq& hyp, const TokenSeq& ref) {
  if (ref.empty()) throw DataError("ter: empty reference");
  const auto& a = hyp.tokens;
  const auto& b = ref.tokens;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    std::swap(prev, cur);
  }
  return std::min(1.0, static_cast<double>(prev[b.size()]) / static_cast<double>(b.size()));
}

double MeteorLite(const TokenSeq& hyp, const TokenSeq& ref) {
  const auto& h = hyp.tokens;
  const auto& r = ref.tokens;
  if (h.empty() || r.empty()) return 0.0;
  // Left-to-right alignment; a token continues the current chunk when it
  // can, otherwise takes the earliest free match.
  std::vector<char> used(r.size(), 0);
  std::vector<long> align(h.size(), -1);
  long prev = -2;
  for (std::size_t i = 0; i < h.size(); ++i) {
    long pick = -1;
    const auto next = static_cast<std::size_t>(prev + 1);
    if (prev >= 0 && next < r.size() && !used[next] && r[next] == h[i]) {
      pick = prev + 1;
    } else {
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (!used[k] && r[k] == h[i]) {
          pick = static_cast<long>(k);
          break;
        }
      }
    }
    if (pick >= 0) used[static_cast<std::size_t>(pick)] = 1;
    align[i] = pick;
    prev = pick;
  }
  std::size_t matches = 0, chunks = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (align[i] < 0) continue;
    ++matches;
    if (i == 0 || align[i - 1] < 0 || align[i - 1] + 1 != align[i]) ++chunks;
  }
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(h.size());
  const double rc = m / static_cast<double>(r.size());
  const double fmean = 10.0 * p * rc / (rc + 9.0 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
  return fmean * (1.0 - penalty);
}

double Nist(const TokenSeq& hyp, const TokenSeq& ref) {
  if (hyp.empty() || ref.empty()) return 0.0;
  constexpr int kMaxOrder = 5;
  std::vector<std::map<Gram, int>> ref_counts(kMaxOrder + 1);
  for (int n = 1; n <= kMaxOrder; ++n) ref_counts[n] = AsCounts(Ngrams(ref, n));
  auto info = [&](const Gram& g, int n) {
    const double count = ref_counts[n].at(g);
    double context;
    if (n == 1) {
      context = static_cast<double>(ref.size());
    } else {
      context = ref_counts[n - 1].at(g.substr(0, g.rfind(' ')));
    }
    return std::log2(context / count);
  };
  double score = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const std::size_t total = NgramCount(hyp.size(), n);
    if (total == 0) break;
    double gained = 0.0;
    for (const auto& [g, c] : AsCounts(Ngrams(hyp, n))) {
      auto it = ref_counts[n].find(g);
      if (it == ref_counts[n].end()) continue;
      gained += std::min(c, it->second) * info(g, n);
    }
    score += gained / static_cast<double>(total);
  }
  const double ratio = std::min(1.0, static_cast<double>(hyp.size()) / static_cast<double>(ref.size()));
  const double beta = std::log(0.5) / std::pow(std::log(1.5), 2.0);
  return score * std::exp(beta * std::pow(std::log(ratio), 2.0));
}

FeatureVector MteVector(const TokenSeq& question, const TokenSeq& comment) {
  if (comment.empty()) throw DataError("mte: empty comment (length ratio undefined)");
  FeatureVector fv;
  const auto matches = static_cast<double>(UnigramMatches(question, comment));
  fv.Add("mte_bleu", SentenceBleu(question, comment));
  fv.Add("mte_ter_noshift", TerNoShift(question, comment));
  fv.Add("mte_meteor_lite", MeteorLite(question, comment));
  fv.Add("mte_nist", Nist(question, comment));
  fv.Add("mte_precision", question.empty() ? 0.0 : matches / static_cast<double>(question.size()));
  fv.Add("mte_recall", matches / static_cast<double>(comment.size()));
  fv.Add("mte_length_ratio", static_cast<double>(question.size()) / static_cast<double>(comment.size()));
  return fv;
}

}  // namespace cqarank
