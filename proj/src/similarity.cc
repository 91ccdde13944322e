#include "cqarank/similarity.h"

#include <algorithm>
#include <cmath>

#include "cqarank/error.h"

namespace cqarank {

GramSeq Ngrams(const TokenSeq& seq, int n) {
  if (n < 1) throw ConfigError("ngrams: n must be >= 1");
  GramSeq out;
  const auto& t = seq.tokens;
  const auto order = static_cast<std::size_t>(n);
  if (t.size() < order) return out;
  out.reserve(t.size() - order + 1);
  for (std::size_t i = 0; i + order <= t.size(); ++i) {
    Gram g = t[i];
    for (std::size_t k = 1; k < order; ++k) {
      g += ' ';
      g += t[i + k];
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::set<Gram> AsSet(const GramSeq& grams) { return {grams.begin(), grams.end()}; }

std::map<Gram, int> AsCounts(const GramSeq& grams) {
  std::map<Gram, int> counts;
  for (const auto& g : grams) ++counts[g];
  return counts;
}

namespace {

std::size_t IntersectionSize(const std::set<Gram>& a, const std::set<Gram>& b) {
  std::size_t n = 0;
  for (const auto& g : a) n += b.contains(g);
  return n;
}

}  // namespace

double Jaccard(const std::set<Gram>& a, const std::set<Gram>& b) {
  const std::size_t inter = IntersectionSize(a, b);
  const std::size_t uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

double Containment(const std::set<Gram>& a, const std::set<Gram>& b) {
  if (a.empty()) return 0.0;
  return static_cast<double>(IntersectionSize(a, b)) / static_cast<double>(a.size());
}

double Cosine(const std::map<Gram, int>& a, const std::map<Gram, int>& b) {
  if (a.empty() || b.empty()) return 0.0;
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [g, c] : a) {
    na += static_cast<double>(c) * c;
    if (auto it = b.find(g); it != b.end()) dot += static_cast<double>(c) * it->second;
  }
  for (const auto& [g, c] : b) nb += static_cast<double>(c) * c;
  return std::min(1.0, dot / std::sqrt(na * nb));
}

std::size_t LcsLength(const GramSeq& a, const GramSeq& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double LcsSim(const GramSeq& a, const GramSeq& b) {
  if (a.empty() || b.empty()) return 0.0;
  return static_cast<double>(LcsLength(a, b)) / static_cast<double>(std::max(a.size(), b.size()));
}

std::size_t GreedyTiling(const GramSeq& a, const GramSeq& b, int min_match) {
  if (min_match < 1) throw ConfigError("gst: min_match must be >= 1");
  const std::size_t n = a.size(), m = b.size();
  std::vector<char> used_a(n, 0), used_b(m, 0);
  std::vector<std::size_t> run((n + 1) * (m + 1), 0);
  std::size_t tiled = 0;
  for (;;) {
    // run[i][j]: length of the unmarked common run ending at a[i-1], b[j-1].
    std::size_t best = 0, best_a = 0, best_b = 0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= m; ++j) {
        std::size_t& r = run[i * (m + 1) + j];
        r = (!used_a[i - 1] && !used_b[j - 1] && a[i - 1] == b[j - 1])
                ? run[(i - 1) * (m + 1) + (j - 1)] + 1
                : 0;
        if (r == 0) continue;
        const std::size_t sa = i - r, sb = j - r;
        if (r > best || (r == best && (sa < best_a || (sa == best_a && sb < best_b)))) {
          best = r;
          best_a = sa;
          best_b = sb;
        }
      }
    }
    if (best == 0 || best < static_cast<std::size_t>(min_match)) break;
    for (std::size_t k = 0; k < best; ++k) used_a[best_a + k] = used_b[best_b + k] = 1;
    tiled += best;
  }
  return tiled;
}

double GstSim(const GramSeq& a, const GramSeq& b, int min_match) {
  if (a.empty() || b.empty()) return 0.0;
  return 2.0 * static_cast<double>(GreedyTiling(a, b, min_match)) /
         static_cast<double>(a.size() + b.size());
}

FeatureVector SimilarityVector(const TokenSeq& qo, const TokenSeq& qs, int min_match) {
  FeatureVector fv;
  for (int n = 1; n <= kMaxSimilarityOrder; ++n) {
    const GramSeq a = Ngrams(qo, n), b = Ngrams(qs, n);
    const auto sa = AsSet(a), sb = AsSet(b);
    const std::string prefix = "sim_n" + std::to_string(n) + "_";
    fv.Add(prefix + "gst", GstSim(a, b, min_match));
    fv.Add(prefix + "lcs", LcsSim(a, b));
    fv.Add(prefix + "jaccard", Jaccard(sa, sb));
    fv.Add(prefix + "containment", Containment(sa, sb));
    fv.Add(prefix + "cosine", Cosine(AsCounts(a), AsCounts(b)));
  }
  return fv;
}

FeatureVector SimilarityVector(std::string_view qo_text, std::string_view qs_text,
                               const SimilarityConfig& cfg) {
  return SimilarityVector(Tokenize(qo_text, cfg.stopwords), Tokenize(qs_text, cfg.stopwords),
                          cfg.min_match);
}

}  // namespace cqarank
