#include "cqarank/mte.h"

#include <gtest/gtest.h>

#include <cmath>

#include "cqarank/error.h"

namespace cqarank {
namespace {

TokenSeq T(std::vector<std::string> v) { return TokenSeq{std::move(v)}; }

TEST(Mte, HandFixture) {
  TokenSeq q = T({"a", "b", "c"}), c = T({"a", "b", "d"});
  FeatureVector v = MteVector(q, c);
  ASSERT_EQ(v.size(), static_cast<std::size_t>(kNumMteFeatures));
  EXPECT_NEAR(v.values[4], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(v.values[5], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(v.values[1], 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(v.values[6], 1.0);
  // p1 = 2/3, smoothed p2 = 2/3, p3 = 1/2, p4 = 1/1; no brevity penalty.
  EXPECT_NEAR(v.values[0], std::pow(2.0 / 3.0 * 2.0 / 3.0 * 0.5, 0.25), 1e-12);
  // one chunk over two matches, Fmean = 2/3
  EXPECT_NEAR(v.values[2], 2.0 / 3.0 * (1.0 - 0.5 / 8.0), 1e-12);
  // only the unigrams carry information: log2(3) each
  EXPECT_NEAR(v.values[3], 2.0 * std::log2(3.0) / 3.0, 1e-12);
}

TEST(Mte, Names) {
  FeatureVector v = MteVector(T({"a"}), T({"a"}));
  EXPECT_EQ(v.names, (std::vector<std::string>{"mte_bleu", "mte_ter_noshift", "mte_meteor_lite", "mte_nist",
                                               "mte_precision", "mte_recall", "mte_length_ratio"}));
}

TEST(Mte, Identity) {
  TokenSeq s = T({"how", "to", "get", "a", "visa", "in", "qatar"});
  FeatureVector v = MteVector(s, s);
  EXPECT_NEAR(v.values[0], 1.0, 1e-12);
  EXPECT_EQ(v.values[1], 0.0);
  EXPECT_NEAR(v.values[2], 1.0 - 0.5 / std::pow(7.0, 3.0), 1e-12);
  EXPECT_GT(v.values[3], 0.0);
  EXPECT_EQ(v.values[4], 1.0);
  EXPECT_EQ(v.values[5], 1.0);
  EXPECT_EQ(v.values[6], 1.0);
}

TEST(Mte, DisjointVocabulary) {
  FeatureVector v = MteVector(T({"a", "b"}), T({"x", "y", "z"}));
  EXPECT_EQ(v.values[0], 0.0);
  EXPECT_EQ(v.values[1], 1.0);
  EXPECT_EQ(v.values[2], 0.0);
  EXPECT_EQ(v.values[3], 0.0);
  EXPECT_EQ(v.values[4], 0.0);
  EXPECT_EQ(v.values[5], 0.0);
  EXPECT_NEAR(v.values[6], 2.0 / 3.0, 1e-15);
}

TEST(Mte, EmptyComment) {
  EXPECT_THROW(MteVector(T({"a"}), T({})), DataError);
  FeatureVector v = MteVector(T({}), T({"a"}));
  EXPECT_EQ(v.values[6], 0.0);
  EXPECT_EQ(v.values[1], 1.0);
}

TEST(Bleu, BrevityPenalty) {
  TokenSeq h = T({"a", "b"}), r = T({"a", "b", "c", "d"});
  // p1 = 1, p2 = 2/2, p3 = 1/1, p4 = 1/1; BP = exp(1 - 4/2)
  EXPECT_NEAR(SentenceBleu(h, r), std::exp(-1.0), 1e-12);
}

TEST(Ter, EditDistance) {
  EXPECT_NEAR(TerNoShift(T({"a", "b", "c"}), T({"b", "c", "a"})), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(TerNoShift(T({"a", "b", "c", "d", "e"}), T({"x"})), 1.0);
}

TEST(Meteor, Fragmentation) {
  // "a b c" vs "c a b": matches 3, chunks 2 (a b | c)
  const double want = 1.0 * (1.0 - 0.5 * std::pow(2.0 / 3.0, 3.0));
  EXPECT_NEAR(MeteorLite(T({"a", "b", "c"}), T({"c", "a", "b"})), want, 1e-12);
}

TEST(UnigramMatches, Clipped) {
  EXPECT_EQ(UnigramMatches(T({"a", "a", "a"}), T({"a", "b"})), 1u);
}

}  // namespace
}  // namespace cqarank
