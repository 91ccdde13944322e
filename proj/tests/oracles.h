// Slow reference implementations used only by the tests. None of them
// share code with the library routines they check.
#ifndef CQARANK_TESTS_ORACLES_H_
#define CQARANK_TESTS_ORACLES_H_

#include <random>
#include <string>
#include <vector>

#include "cqarank/kernel.h"
#include "cqarank/tree.h"

namespace cqarank::oracle {

struct TreeShape {
  int max_nodes = 8;
  int max_depth = 6;
  int max_branch = 4;
  std::vector<std::string> internal_labels = {"A", "B", "C"};
  // "A" doubles as a word so leaf/constituent confusions get exercised.
  std::vector<std::string> leaf_labels = {"a", "b", "A"};
};

// Random tree with at most shape.max_nodes nodes; the root always has at
// least one child.
SyntaxTree RandomTree(std::mt19937_64& rng, const TreeShape& shape = {});

// Subset-tree kernel by enumerating every fragment (a node with all of its
// children, each non-leaf child either cut or expanded) of both trees and
// summing lambda^{#expanded nodes} over equal fragment pairs.
double BruteForceStk(const SyntaxTree& a, const SyntaxTree& b, double lambda);

// Number of subset-tree fragments of `t` (lambda = 1 self-count helper).
std::size_t CountStkFragments(const SyntaxTree& t);

// Partial-tree kernel by enumerating every partial-tree occurrence (any
// child subsequence at every node, recursively) with its node count and
// gap exponent, then summing mu^{nodes} lambda^{e1 + e2} over equal pairs.
double BruteForcePtk(const SyntaxTree& a, const SyntaxTree& b, double lambda, double mu);

// Longest common subsequence by trying every subsequence of `a`.
std::size_t BruteForceLcs(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Greedy tiling by scanning every (start_a, start_b) pair each round.
std::size_t NaiveGreedyTiling(const std::vector<std::string>& a, const std::vector<std::string>& b,
                              int min_match);

// Example with every block filled: 20 uniform similarities, an inverse
// rank, a 5-d vec block and REL-linked macro-trees in both directions
// built from random phrase trees.
Example RandomExample(std::mt19937_64& rng, const std::string& id);

}  // namespace cqarank::oracle

#endif  // CQARANK_TESTS_ORACLES_H_
