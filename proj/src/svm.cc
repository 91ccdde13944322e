#include "cqarank/svm.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "cqarank/error.h"
#include "cqarank/numfmt.h"

namespace cqarank {

void TrainConfig::Validate() const {
  if (!(C > 0.0)) throw ConfigError("train: C must be positive");
  if (!(tol > 0.0)) throw ConfigError("train: tol must be positive");
  if (!(eps > 0.0)) throw ConfigError("train: eps must be positive");
  if (max_passes < 1) throw ConfigError("train: max_passes must be >= 1");
  if (!(positive_weight > 0.0) || !(negative_weight > 0.0))
    throw ConfigError("train: class weights must be positive");
}

namespace {

constexpr double kTau = 1e-12;

class SmoSolver {
 public:
  SmoSolver(const Matrix& q_src, std::span<const int> y, const TrainConfig& cfg)
      : gram_(q_src), y_(y), cfg_(cfg), n_(y.size()), alpha_(n_, 0.0), grad_(n_, -1.0), bound_(n_) {
    for (std::size_t t = 0; t < n_; ++t)
      bound_[t] = cfg.C * (y_[t] > 0 ? cfg.positive_weight : cfg.negative_weight);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(order_.begin(), order_.end(), rng);
  }

  TrainResult Solve() {
    TrainResult result;
    const std::size_t cap = static_cast<std::size_t>(cfg_.max_passes) * std::max<std::size_t>(n_, 1);
    [[maybe_unused]] double objective = 0.0;
    for (;;) {
      std::size_t i = 0, j = 0;
      const double gap = SelectPair(i, j);
      result.violation = gap;
      if (gap < cfg_.tol) break;
      if (result.iterations >= cap)
        throw NumericalError("smo: no convergence after " + std::to_string(cap) +
                             " updates (violation " + FormatDouble(gap) + ")");
      Update(i, j);
      ++result.iterations;
#ifndef NDEBUG
      const double next = Objective();
      assert(next >= objective - 1e-9 * std::max(1.0, std::abs(objective)));
      objective = next;
#endif
      if (cfg_.record_objective) {
#ifdef NDEBUG
        objective = Objective();
#endif
        result.objective_trace.push_back(objective);
      }
    }
    result.alpha = alpha_;
    result.model = MakeModel();
    return result;
  }

 private:
  double Q(std::size_t a, std::size_t b) const { return y_[a] * y_[b] * gram_(a, b); }
  bool InUp(std::size_t t) const { return y_[t] > 0 ? alpha_[t] < bound_[t] : alpha_[t] > 0.0; }
  bool InLow(std::size_t t) const { return y_[t] > 0 ? alpha_[t] > 0.0 : alpha_[t] < bound_[t]; }
  // -y_t * grad_t = y_t - sum_s alpha_s y_s G_ts.
  double Score(std::size_t t) const { return -y_[t] * grad_[t]; }

  // Maximal violating pair: i maximizes the score over I_up, j minimizes
  // it over I_low, i.e. the pair with the largest |E_i - E_j|. Returns
  // the violation m - M (or -inf if a set is empty).
  double SelectPair(std::size_t& i, std::size_t& j) const {
    double up = -std::numeric_limits<double>::infinity();
    double low = std::numeric_limits<double>::infinity();
    for (std::size_t t : order_) {
      const double s = Score(t);
      if (InUp(t) && s > up) {
        up = s;
        i = t;
      }
      if (InLow(t) && s < low) {
        low = s;
        j = t;
      }
    }
    if (std::isinf(up) || std::isinf(low)) return -std::numeric_limits<double>::infinity();
    return up - low;
  }

  void Update(std::size_t i, std::size_t j) {
    const double ci = bound_[i], cj = bound_[j];
    const double old_i = alpha_[i], old_j = alpha_[j];
    double& ai = alpha_[i];
    double& aj = alpha_[j];
    if (y_[i] != y_[j]) {
      double quad = Q(i, i) + Q(j, j) + 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad_[i] - grad_[j]) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0.0) {
        if (aj < 0.0) {
          aj = 0.0;
          ai = diff;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = -diff;
      }
      if (diff > ci - cj) {
        if (ai > ci) {
          ai = ci;
          aj = ci - diff;
        }
      } else if (aj > cj) {
        aj = cj;
        ai = cj + diff;
      }
    } else {
      double quad = Q(i, i) + Q(j, j) - 2.0 * Q(i, j);
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad_[i] - grad_[j]) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > ci) {
        if (ai > ci) {
          ai = ci;
          aj = sum - ci;
        }
      } else if (aj < 0.0) {
        aj = 0.0;
        ai = sum;
      }
      if (sum > cj) {
        if (aj > cj) {
          aj = cj;
          ai = sum - cj;
        }
      } else if (ai < 0.0) {
        ai = 0.0;
        aj = sum;
      }
    }
    const double di = ai - old_i, dj = aj - old_j;
    for (std::size_t t = 0; t < n_; ++t) grad_[t] += Q(t, i) * di + Q(t, j) * dj;
  }

  double Objective() const {
    double obj = 0.0;
    for (std::size_t t = 0; t < n_; ++t) obj -= 0.5 * alpha_[t] * (grad_[t] - 1.0);
    return obj;
  }

  double Bias() const {
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lb = -std::numeric_limits<double>::infinity();
    double ub = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n_; ++t) {
      const double s = Score(t);
      const bool up = InUp(t), low = InLow(t);
      if (up && low) {
        free_sum += s;
        ++free_count;
      } else if (up) {
        lb = std::max(lb, s);
      } else {
        ub = std::min(ub, s);
      }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    if (std::isinf(lb)) return ub;
    if (std::isinf(ub)) return lb;
    return 0.5 * (lb + ub);
  }

  TrainedModel MakeModel() const {
    TrainedModel m;
    for (std::size_t t = 0; t < n_; ++t) {
      if (alpha_[t] > cfg_.eps) {
        m.support_indices.push_back(t);
        m.dual_coefs.push_back(alpha_[t] * y_[t]);
      }
    }
    m.bias = Bias();
    m.train_size = n_;
    return m;
  }

  const Matrix& gram_;
  std::span<const int> y_;
  const TrainConfig& cfg_;
  std::size_t n_;
  std::vector<double> alpha_;
  std::vector<double> grad_;  // (Q alpha)_t - 1
  std::vector<double> bound_;
  std::vector<std::size_t> order_;
};

void CheckProblem(const Matrix& gram, std::span<const int> labels) {
  const std::size_t n = labels.size();
  if (n == 0) throw DataError("smo: no training examples");
  if (gram.rows() != n || gram.cols() != n)
    throw DataError("smo: gram is " + std::to_string(gram.rows()) + "x" + std::to_string(gram.cols()) +
                    " but there are " + std::to_string(n) + " labels");
  bool pos = false, neg = false;
  for (int y : labels) {
    if (y != 1 && y != -1) throw DataError("smo: labels must be +1 or -1");
    (y > 0 ? pos : neg) = true;
  }
  if (!pos || !neg) throw DataError("smo: training labels contain a single class");
  if (gram.Asymmetry() > 1e-9) throw DataError("smo: gram matrix is not symmetric");
}

}  // namespace

TrainResult TrainSmo(const Matrix& gram, std::span<const int> labels, const TrainConfig& cfg) {
  cfg.Validate();
  CheckProblem(gram, labels);
  return SmoSolver(gram, labels, cfg).Solve();
}

double DualObjective(const Matrix& gram, std::span<const int> labels, std::span<const double> alpha) {
  double linear = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    linear += alpha[i];
    for (std::size_t j = 0; j < alpha.size(); ++j)
      quad += alpha[i] * alpha[j] * labels[i] * labels[j] * gram(i, j);
  }
  return linear - 0.5 * quad;
}

double Decision(const TrainedModel& model, std::span<const double> kernel_row) {
  if (kernel_row.size() != model.dual_coefs.size())
    throw DataError("decision: kernel row has " + std::to_string(kernel_row.size()) +
                    " entries, model has " + std::to_string(model.dual_coefs.size()) + " support vectors");
  double f = model.bias;
  for (std::size_t k = 0; k < kernel_row.size(); ++k) f += model.dual_coefs[k] * kernel_row[k];
  return f;
}

std::string Checksum(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

namespace {
constexpr const char* kModelMagic = "cqarank-model v1";
}

void SaveModel(const TrainedModel& model, const std::string& path) {
  if (model.support_indices.size() != model.dual_coefs.size())
    throw DataError("save_model: support/coefficient length mismatch");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write model file " + path);
  out << kModelMagic << '\n'
      << "kernel_fingerprint " << model.kernel_fingerprint << '\n'
      << "train_checksum " << model.train_checksum << '\n'
      << "train_size " << model.train_size << '\n'
      << "bias " << FormatDouble(model.bias) << '\n'
      << "num_support " << model.support_indices.size() << '\n';
  for (std::size_t k = 0; k < model.support_indices.size(); ++k)
    out << "sv " << model.support_indices[k] << ' ' << FormatDouble(model.dual_coefs[k]) << '\n';
  out << "end\n";
  if (!out) throw DataError("error writing model file " + path);
}

TrainedModel LoadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open model file " + path);
  std::string line;
  auto field = [&](const std::string& key) {
    if (!std::getline(in, line)) throw DataError(path + ": truncated model file (missing " + key + ")");
    if (line == key) return std::string();
    if (!line.starts_with(key + " ")) throw DataError(path + ": expected '" + key + "', got '" + line + "'");
    return line.substr(key.size() + 1);
  };
  auto number = [&](const std::string& key) {
    const std::string v = field(key);
    const auto x = ParseInt(v);
    if (!x || *x < 0) throw DataError(path + ": bad " + key);
    return static_cast<std::size_t>(*x);
  };
  if (!std::getline(in, line) || line != kModelMagic) throw DataError(path + ": not a model file");
  TrainedModel m;
  m.kernel_fingerprint = field("kernel_fingerprint");
  m.train_checksum = field("train_checksum");
  m.train_size = number("train_size");
  const auto bias = ParseDouble(field("bias"));
  if (!bias) throw DataError(path + ": bad bias");
  m.bias = *bias;
  const std::size_t k = number("num_support");
  for (std::size_t s = 0; s < k; ++s) {
    std::istringstream row(field("sv"));
    std::string idx, coef;
    row >> idx >> coef;
    const auto i = ParseInt(idx);
    const auto c = ParseDouble(coef);
    if (!i || !c || *i < 0 || static_cast<std::size_t>(*i) >= m.train_size)
      throw DataError(path + ": bad support vector line " + std::to_string(s));
    m.support_indices.push_back(static_cast<std::size_t>(*i));
    m.dual_coefs.push_back(*c);
  }
  field("end");
  return m;
}

bool CheckModelFingerprint(const TrainedModel& model, const KernelConfig& current, bool strict,
                           std::ostream& warn) {
  const std::string fp = current.Fingerprint();
  if (model.kernel_fingerprint == fp) return true;
  const std::string msg = "model kernel fingerprint '" + model.kernel_fingerprint +
                          "' does not match current config '" + fp + "'";
  if (strict) throw DataError(msg);
  warn << "warning: " << msg << '\n';
  return false;
}

}  // namespace cqarank
