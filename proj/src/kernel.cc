#include "cqarank/kernel.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "cqarank/error.h"
#include "cqarank/numfmt.h"

namespace cqarank {

const char* ToString(TreeKernelKind kind) { return kind == TreeKernelKind::kStk ? "STK" : "PTK"; }
const char* ToString(RankKernel kind) { return kind == RankKernel::kLinear ? "LINEAR" : "RBF"; }

void KernelConfig::Validate() const {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw ConfigError("kernel: lambda must be in (0,1]");
  if (!(mu > 0.0 && mu <= 1.0)) throw ConfigError("kernel: mu must be in (0,1]");
  if (gamma && !(*gamma > 0.0)) throw ConfigError("kernel: gamma must be positive");
  if (!use_sim && !use_tk && !use_rank && !use_vec)
    throw ConfigError("kernel: at least one of use_sim, use_tk, use_rank, use_vec must be set");
}

std::string KernelConfig::Fingerprint() const {
  std::ostringstream os;
  os << "tk=" << ToString(tk_kind) << " lambda=" << FormatDouble(lambda)
     << " mu=" << FormatDouble(mu) << " gamma=" << (gamma ? FormatDouble(*gamma) : "auto")
     << " rank_kernel=" << ToString(rank_kernel) << " normalize_tk=" << normalize_tk
     << " use_sim=" << use_sim << " use_tk=" << use_tk << " use_rank=" << use_rank
     << " use_vec=" << use_vec;
  return os.str();
}

double Rbf(std::span<const double> u, std::span<const double> v, double gamma) {
  if (u.size() != v.size())
    throw DataError("rbf: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()) + ")");
  double d2 = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double Dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw DataError("dot: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                    std::to_string(v.size()) + ")");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

void CheckBlocks(const Example& e, const KernelConfig& cfg) {
  auto missing = [&](const char* block) {
    return DataError("example " + e.query_id + "/" + e.candidate_id + " lacks the " + block +
                     " block");
  };
  if (cfg.use_sim && !e.sim) throw missing("sim");
  if (cfg.use_tk && (!e.tree_o || !e.tree_s)) throw missing("tree");
  if (cfg.use_rank && !e.rank) throw missing("rank");
  if (cfg.use_vec && !e.vec) throw missing("vec");
}

SelfKernels ComputeSelfKernels(const Example& e, const KernelConfig& cfg) {
  SelfKernels s;
  if (!cfg.use_tk || !cfg.normalize_tk) return s;
  if (!e.tree_o || !e.tree_s)
    throw DataError("example " + e.query_id + "/" + e.candidate_id + " lacks the tree block");
  s.tk_o = TreeKernel(cfg.tk_kind, *e.tree_o, *e.tree_o, cfg.lambda, cfg.mu);
  s.tk_s = TreeKernel(cfg.tk_kind, *e.tree_s, *e.tree_s, cfg.lambda, cfg.mu);
  return s;
}

double PairTk(const Example& a, const SelfKernels& sa, const Example& b, const SelfKernels& sb,
              const KernelConfig& cfg) {
  if (!a.tree_o || !a.tree_s || !b.tree_o || !b.tree_s)
    throw DataError("pair_tk: example without REL-linked trees");
  double first = TreeKernel(cfg.tk_kind, *a.tree_o, *b.tree_o, cfg.lambda, cfg.mu);
  double second = TreeKernel(cfg.tk_kind, *a.tree_s, *b.tree_s, cfg.lambda, cfg.mu);
  if (cfg.normalize_tk) {
    first = NormalizeKernel(first, sa.tk_o, sb.tk_o);
    second = NormalizeKernel(second, sa.tk_s, sb.tk_s);
  }
  return first + second;
}

double PairTk(const Example& a, const Example& b, const KernelConfig& cfg) {
  KernelConfig tk_only = cfg;
  tk_only.use_tk = true;
  return PairTk(a, ComputeSelfKernels(a, tk_only), b, ComputeSelfKernels(b, tk_only), tk_only);
}

double CombinedKernel(const Example& a, const SelfKernels& sa, const Example& b,
                      const SelfKernels& sb, const KernelConfig& cfg) {
  CheckBlocks(a, cfg);
  CheckBlocks(b, cfg);
  double k = 0.0;
  if (cfg.use_sim) k += Rbf(*a.sim, *b.sim, cfg.gamma.value_or(1.0 / static_cast<double>(std::max<std::size_t>(a.sim->size(), 1))));
  if (cfg.use_tk) k += PairTk(a, sa, b, sb, cfg);
  if (cfg.use_rank) {
    const double ra = *a.rank, rb = *b.rank;
    if (cfg.rank_kernel == RankKernel::kLinear) {
      k += ra * rb;
    } else {
      k += std::exp(-cfg.gamma.value_or(1.0) * (ra - rb) * (ra - rb));
    }
  }
  if (cfg.use_vec) k += Dot(*a.vec, *b.vec);
  return k;
}

double CombinedKernel(const Example& a, const Example& b, const KernelConfig& cfg) {
  return CombinedKernel(a, ComputeSelfKernels(a, cfg), b, ComputeSelfKernels(b, cfg), cfg);
}

double Matrix::Asymmetry() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < i && j < cols_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

namespace {

std::vector<SelfKernels> SelfKernelsOf(std::span<const Example> xs, const KernelConfig& cfg) {
  std::vector<SelfKernels> out;
  out.reserve(xs.size());
  for (const auto& e : xs) {
    CheckBlocks(e, cfg);
    out.push_back(ComputeSelfKernels(e, cfg));
  }
  return out;
}

// Runs fn(row) for rows [0, n) on `threads` workers, rows interleaved.
// The first exception thrown by any worker is rethrown.
template <typename Fn>
void ParallelRows(std::size_t n, unsigned threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

Matrix GramMatrix(std::span<const Example> examples, const KernelConfig& cfg, unsigned threads) {
  cfg.Validate();
  if (examples.empty()) throw DataError("gram: empty example list");
  const auto self = SelfKernelsOf(examples, cfg);
  const std::size_t n = examples.size();
  Matrix g(n, n);
  ParallelRows(n, threads, [&](std::size_t i) {
    for (std::size_t j = 0; j <= i; ++j)
      g(i, j) = CombinedKernel(examples[i], self[i], examples[j], self[j], cfg);
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(j, i) = g(i, j);
  return g;
}

Matrix CrossKernel(std::span<const Example> rows, std::span<const Example> cols,
                   const KernelConfig& cfg, unsigned threads) {
  cfg.Validate();
  const auto self_r = SelfKernelsOf(rows, cfg);
  const auto self_c = SelfKernelsOf(cols, cfg);
  Matrix k(rows.size(), cols.size());
  ParallelRows(rows.size(), threads, [&](std::size_t i) {
    for (std::size_t j = 0; j < cols.size(); ++j)
      k(i, j) = CombinedKernel(rows[i], self_r[i], cols[j], self_c[j], cfg);
  });
  return k;
}

namespace {
constexpr const char* kGramMagic = "# cqarank gram v1";
}

void WriteGramFile(const std::string& path, const Matrix& gram, const KernelConfig& cfg) {
  if (gram.rows() != gram.cols()) throw DataError("gram file: matrix is not square");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write gram file " + path);
  out << kGramMagic << '\n' << "fingerprint " << cfg.Fingerprint() << '\n'
      << "size " << gram.rows() << '\n';
  for (std::size_t i = 0; i < gram.rows(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) out << (j ? " " : "") << FormatDouble(gram(i, j));
    out << '\n';
  }
  if (!out) throw DataError("error writing gram file " + path);
}

Matrix ReadGramFile(const std::string& path, const KernelConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open gram file " + path);
  std::string line;
  if (!std::getline(in, line) || line != kGramMagic) throw DataError(path + ": not a gram file");
  if (!std::getline(in, line) || !line.starts_with("fingerprint "))
    throw DataError(path + ": missing fingerprint");
  if (line.substr(12) != cfg.Fingerprint())
    throw DataError(path + ": kernel fingerprint mismatch (file: " + line.substr(12) + ")");
  if (!std::getline(in, line) || !line.starts_with("size ")) throw DataError(path + ": missing size");
  const auto n = ParseInt(line.substr(5));
  if (!n || *n <= 0) throw DataError(path + ": bad size");
  const auto size = static_cast<std::size_t>(*n);
  Matrix g(size, size);
  for (std::size_t i = 0; i < size; ++i) {
    if (!std::getline(in, line)) throw DataError(path + ": truncated at row " + std::to_string(i));
    std::istringstream row(line);
    std::string cell;
    std::size_t j = 0;
    while (row >> cell) {
      const auto v = ParseDouble(cell);
      if (!v || j > i) throw DataError(path + ": malformed row " + std::to_string(i));
      g(i, j) = g(j, i) = *v;
      ++j;
    }
    if (j != i + 1) throw DataError(path + ": malformed row " + std::to_string(i));
  }
  return g;
}

}  // namespace cqarank
