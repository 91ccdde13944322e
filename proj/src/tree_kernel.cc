#include "cqarank/tree_kernel.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "cqarank/error.h"

namespace cqarank {

KernelTree::KernelTree(const SyntaxTree& tree) : canonical_(ToBracketed(tree)) {
  nodes_.reserve(NodeCount(tree));
  Add(tree);
  by_label_.resize(nodes_.size());
  std::iota(by_label_.begin(), by_label_.end(), 0);
  std::stable_sort(by_label_.begin(), by_label_.end(),
                   [this](int x, int y) { return node(x).label < node(y).label; });
  for (int i : by_label_)
    if (!node(i).children.empty()) by_production_.push_back(i);
  std::stable_sort(by_production_.begin(), by_production_.end(),
                   [this](int x, int y) { return node(x).production < node(y).production; });
}

int KernelTree::Add(const SyntaxTree& t) {
  Node n;
  n.label = t.label();
  if (!t.is_leaf()) {
    n.production = t.label();
    for (const auto& c : t.children()) {
      n.children.push_back(Add(c));
      // '\x1f' cannot occur inside a label read from a bracketed file.
      n.production += c.is_leaf() ? "\x1f'" : "\x1f";
      n.production += c.label();
    }
  }
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

// Calls fn(i, j) for every pair of indices whose keys compare equal.
template <typename Key, typename Fn>
void ForEachMatchingPair(const std::vector<int>& xs, const std::vector<int>& ys, Key key, Fn fn) {
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    const std::string& kx = key(0, xs[i]);
    const std::string& ky = key(1, ys[j]);
    const int cmp = kx.compare(ky);
    if (cmp < 0) {
      ++i;
    } else if (cmp > 0) {
      ++j;
    } else {
      std::size_t i_end = i, j_end = j;
      while (i_end < xs.size() && key(0, xs[i_end]) == kx) ++i_end;
      while (j_end < ys.size() && key(1, ys[j_end]) == ky) ++j_end;
      for (std::size_t p = i; p < i_end; ++p)
        for (std::size_t q = j; q < j_end; ++q) fn(xs[p], ys[q]);
      i = i_end;
      j = j_end;
    }
  }
}

// Puts the pair in a canonical order so that k(a,b) and k(b,a) run the
// exact same floating-point operations.
std::pair<const KernelTree*, const KernelTree*> Ordered(const KernelTree& a, const KernelTree& b) {
  if (b.canonical() < a.canonical()) return {&b, &a};
  return {&a, &b};
}

class StkEvaluator {
 public:
  StkEvaluator(const KernelTree& a, const KernelTree& b, double lambda)
      : a_(a), b_(b), lambda_(lambda), memo_(a.size() * b.size(), -1.0) {}

  double Run() {
    double sum = 0.0;
    ForEachMatchingPair(
        a_.by_production(), b_.by_production(),
        [this](int side, int n) -> const std::string& {
          return (side == 0 ? a_ : b_).node(n).production;
        },
        [&](int i, int j) { sum += Delta(i, j); });
    return sum;
  }

 private:
  // Only called on node pairs with equal (non-empty) productions.
  double Delta(int i, int j) {
    double& slot = memo_[static_cast<std::size_t>(i) * b_.size() + static_cast<std::size_t>(j)];
    if (slot >= 0.0) return slot;
    const auto& ci = a_.node(i).children;
    const auto& cj = b_.node(j).children;
    double prod = lambda_;
    for (std::size_t k = 0; k < ci.size(); ++k) {
      const auto& x = a_.node(ci[k]);
      const auto& y = b_.node(cj[k]);
      if (!x.production.empty() && x.production == y.production) prod *= 1.0 + Delta(ci[k], cj[k]);
    }
    return slot = prod;
  }

  const KernelTree& a_;
  const KernelTree& b_;
  double lambda_;
  std::vector<double> memo_;
};

class PtkEvaluator {
 public:
  PtkEvaluator(const KernelTree& a, const KernelTree& b, double lambda, double mu)
      : a_(a),
        b_(b),
        lambda_(lambda),
        lambda2_(lambda * lambda),
        mu_(mu),
        memo_(a.size() * b.size(), -1.0) {}

  double Run() {
    double sum = 0.0;
    ForEachMatchingPair(
        a_.by_label(), b_.by_label(),
        [this](int side, int n) -> const std::string& { return (side == 0 ? a_ : b_).node(n).label; },
        [&](int i, int j) { sum += Delta(i, j); });
    return sum;
  }

 private:
  // Only called on node pairs with equal labels.
  double Delta(int i, int j) {
    double& slot = memo_[static_cast<std::size_t>(i) * b_.size() + static_cast<std::size_t>(j)];
    if (slot >= 0.0) return slot;
    const auto& ci = a_.node(i).children;
    const auto& cj = b_.node(j).children;
    double subseq = 0.0;
    if (!ci.empty() && !cj.empty()) {
      // acc(p,q): weighted sum of matched subsequence pairs ending at or
      // before children p, q, with gap decay to position (p, q).
      const std::size_t n = ci.size(), m = cj.size(), w = m + 1;
      std::vector<double> acc((n + 1) * w, 0.0);
      for (std::size_t p = 1; p <= n; ++p) {
        for (std::size_t q = 1; q <= m; ++q) {
          double ending = 0.0;
          if (a_.node(ci[p - 1]).label == b_.node(cj[q - 1]).label) {
            ending = lambda2_ * Delta(ci[p - 1], cj[q - 1]) * (1.0 + acc[(p - 1) * w + (q - 1)]);
            subseq += ending;
          }
          acc[p * w + q] = ending + lambda_ * acc[(p - 1) * w + q] + lambda_ * acc[p * w + (q - 1)] -
                           lambda2_ * acc[(p - 1) * w + (q - 1)];
        }
      }
    }
    return slot = mu_ * (lambda2_ + subseq);
  }

  const KernelTree& a_;
  const KernelTree& b_;
  double lambda_;
  double lambda2_;
  double mu_;
  std::vector<double> memo_;
};

}  // namespace

double Stk(const KernelTree& a, const KernelTree& b, double lambda) {
  auto [x, y] = Ordered(a, b);
  return StkEvaluator(*x, *y, lambda).Run();
}

double Stk(const SyntaxTree& a, const SyntaxTree& b, double lambda) {
  return Stk(KernelTree(a), KernelTree(b), lambda);
}

double Ptk(const KernelTree& a, const KernelTree& b, double lambda, double mu) {
  auto [x, y] = Ordered(a, b);
  return PtkEvaluator(*x, *y, lambda, mu).Run();
}

double Ptk(const SyntaxTree& a, const SyntaxTree& b, double lambda, double mu) {
  return Ptk(KernelTree(a), KernelTree(b), lambda, mu);
}

double TreeKernel(TreeKernelKind kind, const KernelTree& a, const KernelTree& b, double lambda,
                  double mu) {
  return kind == TreeKernelKind::kStk ? Stk(a, b, lambda) : Ptk(a, b, lambda, mu);
}

double NormalizeKernel(double k_xy, double k_xx, double k_yy) {
  if (!(k_xx > 0.0) || !(k_yy > 0.0)) throw NumericalError("degenerate self-kernel");
  return k_xy / std::sqrt(k_xx * k_yy);
}

}  // namespace cqarank
