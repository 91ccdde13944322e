#ifndef CQARANK_MTE_H_
#define CQARANK_MTE_H_

#include <vector>

#include "cqarank/feature_vector.h"
#include "cqarank/text.h"

namespace cqarank {

// Machine-translation-evaluation scores with the question as the
// hypothesis and the comment as the single reference. Both sequences
// keep their stopwords.

// Sentence BLEU up to 4-grams; orders 2..4 use add-one smoothing, plus
// the standard brevity penalty.
double SentenceBleu(const TokenSeq& hyp, const TokenSeq& ref);
// Word edit distance (no block shifts) / |ref|, capped at 1.
double TerNoShift(const TokenSeq& hyp, const TokenSeq& ref);
// Exact-match METEOR: Fmean = 10PR/(R+9P) times 1 - 0.5 (chunks/matches)^3.
double MeteorLite(const TokenSeq& hyp, const TokenSeq& ref);
// NIST up to 5-grams, information weights from the reference's own counts.
double Nist(const TokenSeq& hyp, const TokenSeq& ref);
// Clipped unigram matches.
std::size_t UnigramMatches(const TokenSeq& hyp, const TokenSeq& ref);

// bleu, ter_noshift, meteor_lite, nist, precision, recall, length ratio
// |question| / |comment|. Throws DataError when the comment is empty.
FeatureVector MteVector(const TokenSeq& question, const TokenSeq& comment);

inline constexpr int kNumMteFeatures = 7;

}  // namespace cqarank

#endif  // CQARANK_MTE_H_
