#ifndef CQARANK_TREE_KERNEL_H_
#define CQARANK_TREE_KERNEL_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cqarank/tree.h"

namespace cqarank {

enum class TreeKernelKind { kStk, kPtk };

// Flattened, read-only view of a SyntaxTree prepared for kernel
// evaluation: nodes in post-order (children precede parents), label and
// production keys, and node indices sorted by those keys so that matching
// node pairs are found with a merge instead of a full double loop.
class KernelTree {
 public:
  struct Node {
    std::string label;
    // label followed by the child labels; leaf children are marked so a
    // word never matches a same-named constituent. Empty for leaves.
    std::string production;
    std::vector<int> children;
  };

  explicit KernelTree(const SyntaxTree& tree);

  std::size_t size() const { return nodes_.size(); }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& by_label() const { return by_label_; }
  const std::vector<int>& by_production() const { return by_production_; }
  // Canonical bracketed form, used to fix argument order.
  const std::string& canonical() const { return canonical_; }

 private:
  int Add(const SyntaxTree& t);

  std::vector<Node> nodes_;
  std::vector<int> by_label_;
  std::vector<int> by_production_;  // internal nodes only
  std::string canonical_;
};

// Subset-tree kernel: sum over node pairs of
//   D(n1,n2) = 0                              productions differ / leaves
//            = lambda * prod_j (1 + D(c1j,c2j)) otherwise
// (for preterminals the product is empty of matches, giving lambda).
double Stk(const KernelTree& a, const KernelTree& b, double lambda);
double Stk(const SyntaxTree& a, const SyntaxTree& b, double lambda);

// Partial-tree kernel: sum over node pairs with equal labels of
//   D(n1,n2) = mu * (lambda^2 + sum_{J1,J2} lambda^{d(J1)+d(J2)} prod_i D(c1_J1i, c2_J2i))
// over equal-length child subsequences J1, J2, d(J) being the span of J.
// The subsequence sum is evaluated in O(|c1| |c2|) per node pair.
double Ptk(const KernelTree& a, const KernelTree& b, double lambda, double mu);
double Ptk(const SyntaxTree& a, const SyntaxTree& b, double lambda, double mu);

double TreeKernel(TreeKernelKind kind, const KernelTree& a, const KernelTree& b, double lambda,
                  double mu);

// k_xy / sqrt(k_xx k_yy). Throws NumericalError on a non-positive self-kernel.
double NormalizeKernel(double k_xy, double k_xx, double k_yy);

}  // namespace cqarank

#endif  // CQARANK_TREE_KERNEL_H_
