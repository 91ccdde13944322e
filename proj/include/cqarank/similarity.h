#ifndef CQARANK_SIMILARITY_H_
#define CQARANK_SIMILARITY_H_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cqarank/feature_vector.h"
#include "cqarank/text.h"

namespace cqarank {

using Gram = std::string;
using GramSeq = std::vector<Gram>;

// Contiguous n-token windows in order, tokens joined by a space.
// Returns max(0, len - n + 1) entries; duplicates are kept.
GramSeq Ngrams(const TokenSeq& seq, int n);

std::set<Gram> AsSet(const GramSeq& grams);
std::map<Gram, int> AsCounts(const GramSeq& grams);

// |A ∩ B| / |A ∪ B|, 0 when both are empty.
double Jaccard(const std::set<Gram>& a, const std::set<Gram>& b);
// |A ∩ B| / |A|, 0 when A is empty. A is the original-question side.
double Containment(const std::set<Gram>& a, const std::set<Gram>& b);
// Cosine of the count vectors, 0 if either is empty.
double Cosine(const std::map<Gram, int>& a, const std::map<Gram, int>& b);
// LCS length / max(|a|, |b|), 0 if either is empty.
double LcsSim(const GramSeq& a, const GramSeq& b);
std::size_t LcsLength(const GramSeq& a, const GramSeq& b);

// Greedy string tiling: repeatedly mark the longest common run of
// unmarked items (length >= min_match; ties go to the leftmost run in a,
// then in b) until none is left. Returns the total tiled length.
std::size_t GreedyTiling(const GramSeq& a, const GramSeq& b, int min_match);
// 2 * tiled / (|a| + |b|), 0 if either is empty.
double GstSim(const GramSeq& a, const GramSeq& b, int min_match);

struct SimilarityConfig {
  StopwordSet stopwords;
  int min_match = 1;
};

inline constexpr int kMaxSimilarityOrder = 4;
inline constexpr int kNumSimilarities = 20;

// For n = 1..4 (major) and gst, lcs, jaccard, containment, cosine (minor)
// over the word n-grams of the stopword-filtered texts. Names look like
// "sim_n2_jaccard".
FeatureVector SimilarityVector(std::string_view qo_text, std::string_view qs_text,
                               const SimilarityConfig& cfg);
FeatureVector SimilarityVector(const TokenSeq& qo, const TokenSeq& qs, int min_match);

}  // namespace cqarank

#endif  // CQARANK_SIMILARITY_H_
