#include "cqarank/rel_link.h"

#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracles.h"

namespace cqarank {
namespace {

SyntaxTree P(const char* s) { return ParseBracketed(s); }

// Same shape and leaves; labels equal up to a REL- prefix on phrase nodes.
bool LabelIsomorphic(const SyntaxTree& out, const SyntaxTree& in, const std::set<std::string>& phrases) {
  if (out.num_children() != in.num_children()) return false;
  if (out.label() != in.label()) {
    if (in.is_leaf() || !phrases.contains(in.label())) return false;
    if (out.label() != std::string(kRelPrefix) + in.label()) return false;
  }
  for (std::size_t i = 0; i < in.num_children(); ++i)
    if (!LabelIsomorphic(out.child(i), in.child(i), phrases)) return false;
  return true;
}

int CountRel(const SyntaxTree& t) {
  int n = t.label().starts_with(kRelPrefix) ? 1 : 0;
  for (const auto& c : t.children()) n += CountRel(c);
  return n;
}

TEST(RelLink, IdenticalTreesTagEveryPhrase) {
  SyntaxTree x = P("(ROOT (S (NP (NN visa)) (VP (VB get))))");
  EXPECT_EQ(ToBracketed(RelLink(x, x)), "(ROOT (S (REL-NP (NN visa)) (REL-VP (VB get))))");
}

TEST(RelLink, DisjointVocabularyIsIdentity) {
  SyntaxTree x = P("(ROOT (S (NP (NN visa)) (VP (VB get))))");
  SyntaxTree y = P("(ROOT (S (NP (NN wife)) (VP (VB drive))))");
  EXPECT_EQ(RelLink(x, y), x);
}

TEST(RelLink, OnlyMatchingPhraseTagged) {
  SyntaxTree x = P("(ROOT (S (VP (VB get) (NP (NN visa) (NNP qatar)))))");
  SyntaxTree y = P("(ROOT (S (NP (NN visa) (NN wife))))");
  // The VP dominates "visa" as well, so it matches too; the stand-alone
  // VP over "get" below does not.
  EXPECT_EQ(ToBracketed(RelLink(x, y)), "(ROOT (S (REL-VP (VB get) (REL-NP (NN visa) (NNP qatar)))))");
  SyntaxTree x2 = P("(ROOT (S (VP (VB get)) (NP (NN visa) (NNP qatar))))");
  EXPECT_EQ(ToBracketed(RelLink(x2, y)), "(ROOT (S (VP (VB get)) (REL-NP (NN visa) (NNP qatar))))");
}

TEST(RelLink, Asymmetric) {
  SyntaxTree x = P("(ROOT (S (NP (NN visa)) (VP (VB get))))");
  SyntaxTree y = P("(ROOT (NP (NN visa) (PP (IN for) (NP (NN wife)))))");
  SyntaxTree xy = RelLink(x, y);
  SyntaxTree yx = RelLink(y, x);
  EXPECT_EQ(ToBracketed(xy), "(ROOT (S (REL-NP (NN visa)) (VP (VB get))))");
  EXPECT_EQ(ToBracketed(yx), "(ROOT (REL-NP (NN visa) (PP (IN for) (NP (NN wife)))))");
}

TEST(RelLink, CaseFoldingAndStopwords) {
  SyntaxTree x = P("(ROOT (NP (DT The) (NN Visa)))");
  SyntaxTree y = P("(ROOT (NP (DT the) (NN visa)))");
  RelConfig cfg;
  cfg.stopwords = {"the"};
  EXPECT_EQ(CountRel(RelLink(x, y, cfg)), 1);
  cfg.match_case_insensitive = false;
  EXPECT_EQ(CountRel(RelLink(x, y, cfg)), 0);
  SyntaxTree z = P("(ROOT (NP (DT the) (NN car)))");
  cfg.match_case_insensitive = true;
  EXPECT_EQ(CountRel(RelLink(x, z, cfg)), 0);
}

TEST(RelLink, MinSharedTokens) {
  SyntaxTree x = P("(ROOT (NP (NN visa) (NN fee)) (NP (NN visa)))");
  SyntaxTree y = P("(ROOT (NP (NN visa) (NN fee)))");
  RelConfig cfg;
  cfg.min_shared_tokens = 2;
  EXPECT_EQ(ToBracketed(RelLink(x, y, cfg)), "(ROOT (REL-NP (NN visa) (NN fee)) (NP (NN visa)))");
}

TEST(RelLink, LeavesNeverTagged) {
  SyntaxTree x = P("(ROOT (NP NP))");
  // The leaf "NP" is a word, not a phrase.
  EXPECT_EQ(ToBracketed(RelLink(x, x)), "(ROOT (REL-NP NP))");
  RelConfig cfg;
  cfg.phrase_labels = {"NN"};
  EXPECT_EQ(ToBracketed(RelLink(P("(ROOT (NN visa))"), P("(ROOT (NN visa))"), cfg)), "(ROOT (REL-NN visa))");
}

TEST(RelLink, RejectsTaggedInput) {
  SyntaxTree tagged = P("(ROOT (REL-NP (NN visa)))");
  SyntaxTree plain = P("(ROOT (NP (NN visa)))");
  EXPECT_THROW(RelLink(tagged, plain), DataError);
  EXPECT_THROW(RelLink(plain, tagged), DataError);
  EXPECT_TRUE(HasRelTag(tagged));
  EXPECT_FALSE(HasRelTag(plain));
}

TEST(RelConfig, Validate) {
  RelConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.min_shared_tokens = 0;
  EXPECT_THROW(cfg.Validate(), ConfigError);
  cfg = {};
  cfg.phrase_labels.clear();
  EXPECT_THROW(cfg.Validate(), ConfigError);
}

TEST(RelLinkProperty, StructurePreservedInputsUntouchedMonotone) {
  std::mt19937_64 rng(11);
  oracle::TreeShape shape;
  shape.max_nodes = 25;
  shape.internal_labels = {"NP", "VP", "PP", "S", "NN"};
  shape.leaf_labels = {"visa", "get", "qatar", "wife", "work", "Visa"};
  const RelConfig cfg;
  for (int i = 0; i < 300; ++i) {
    const SyntaxTree x = oracle::RandomTree(rng, shape);
    const SyntaxTree y = oracle::RandomTree(rng, shape);
    const SyntaxTree y_big = SyntaxTree("ROOT", {y, oracle::RandomTree(rng, shape)});
    const SyntaxTree x_copy = x, y_copy = y;
    SyntaxTree out = RelLink(x, y, cfg);
    EXPECT_EQ(x, x_copy);
    EXPECT_EQ(y, y_copy);
    EXPECT_TRUE(LabelIsomorphic(out, x, cfg.phrase_labels)) << ToBracketed(out);
    EXPECT_EQ(out.Yield(), x.Yield());
    // Every tag survives a larger y vocabulary.
    SyntaxTree out_big = RelLink(x, y_big, cfg);
    std::function<void(const SyntaxTree&, const SyntaxTree&)> check = [&](const SyntaxTree& a,
                                                                           const SyntaxTree& b) {
      if (a.label().starts_with(kRelPrefix)) EXPECT_TRUE(b.label().starts_with(kRelPrefix));
      for (std::size_t k = 0; k < a.num_children(); ++k) check(a.child(k), b.child(k));
    };
    check(out, out_big);
  }
}

}  // namespace
}  // namespace cqarank
