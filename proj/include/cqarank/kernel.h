#ifndef CQARANK_KERNEL_H_
#define CQARANK_KERNEL_H_

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqarank/tree_kernel.h"

namespace cqarank {

enum class RankKernel { kLinear, kRbf };

struct KernelConfig {
  TreeKernelKind tk_kind = TreeKernelKind::kPtk;
  double lambda = 0.4;
  double mu = 0.4;
  // Unset: each RBF block uses 1 / (its dimension).
  std::optional<double> gamma;
  RankKernel rank_kernel = RankKernel::kRbf;
  bool normalize_tk = true;
  bool use_sim = true;
  bool use_tk = true;
  bool use_rank = true;
  // Dense block (embeddings, MTE scores) under a linear kernel.
  bool use_vec = false;

  void Validate() const;
  // Canonical one-line description; two configs produce the same kernel
  // iff their fingerprints are equal.
  std::string Fingerprint() const;
};

const char* ToString(TreeKernelKind kind);
const char* ToString(RankKernel kind);

// One (original question, candidate) pair in kernel space.
struct Example {
  std::string query_id;
  std::string candidate_id;
  int original_rank = 0;
  // +1 relevant, -1 irrelevant, 0 unknown.
  int label = 0;

  std::optional<std::vector<double>> sim;
  std::optional<double> rank;
  std::optional<std::vector<double>> vec;
  // t(qo, qs): qo's macro-tree with REL tags w.r.t. qs, and t(qs, qo).
  std::shared_ptr<const KernelTree> tree_o;
  std::shared_ptr<const KernelTree> tree_s;
};

// Self tree-kernel values of an example, cached for normalization.
struct SelfKernels {
  double tk_o = 0.0;
  double tk_s = 0.0;
};

double Rbf(std::span<const double> u, std::span<const double> v, double gamma);
double Dot(std::span<const double> u, std::span<const double> v);

SelfKernels ComputeSelfKernels(const Example& e, const KernelConfig& cfg);

// TK(t(qo^i,qs^i), t(qo^j,qs^j)) + TK(t(qs^i,qo^i), t(qs^j,qo^j)), each
// summand normalized when cfg.normalize_tk.
double PairTk(const Example& a, const Example& b, const KernelConfig& cfg);
double PairTk(const Example& a, const SelfKernels& sa, const Example& b, const SelfKernels& sb,
              const KernelConfig& cfg);

// Sum of the enabled blocks: RBF on sim, pair tree kernel, linear or RBF
// on rank, linear on vec.
double CombinedKernel(const Example& a, const Example& b, const KernelConfig& cfg);
double CombinedKernel(const Example& a, const SelfKernels& sa, const Example& b,
                      const SelfKernels& sb, const KernelConfig& cfg);

// Throws DataError naming the first block enabled in cfg but absent from e.
void CheckBlocks(const Example& e, const KernelConfig& cfg);

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  // Largest |G_ij - G_ji|.
  double Asymmetry() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// G[i][j] = CombinedKernel(e_i, e_j). Cells are filled by `threads`
// workers (0 = hardware concurrency); the result does not depend on the
// thread count.
Matrix GramMatrix(std::span<const Example> examples, const KernelConfig& cfg, unsigned threads = 0);

// K[i][j] = CombinedKernel(rows_i, cols_j).
Matrix CrossKernel(std::span<const Example> rows, std::span<const Example> cols,
                   const KernelConfig& cfg, unsigned threads = 0);

// Text cache: header with the kernel fingerprint, then the lower
// triangle row by row.
void WriteGramFile(const std::string& path, const Matrix& gram, const KernelConfig& cfg);
Matrix ReadGramFile(const std::string& path, const KernelConfig& cfg);

}  // namespace cqarank

#endif  // CQARANK_KERNEL_H_
