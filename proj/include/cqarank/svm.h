#ifndef CQARANK_SVM_H_
#define CQARANK_SVM_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cqarank/kernel.h"

namespace cqarank {

struct TrainConfig {
  double C = 1.0;
  // Stop when the maximal KKT violation (max over I_up minus min over
  // I_low of -y_t * grad_t) drops below tol.
  double tol = 1e-3;
  // Multipliers with alpha <= eps are not kept as support vectors.
  double eps = 1e-9;
  // Iteration cap is max_passes * n pair updates.
  int max_passes = 10000;
  // Fixes the scan order used to break ties between equally violating
  // indices.
  std::uint64_t seed = 1;
  // Per-class multipliers on C.
  double positive_weight = 1.0;
  double negative_weight = 1.0;
  // Keep the dual objective after every update in TrainResult.
  bool record_objective = false;

  void Validate() const;
};

// Dual expansion r(x) = sum_k dual_coefs[k] * K(train[support_indices[k]], x) + bias.
struct TrainedModel {
  std::vector<std::size_t> support_indices;
  std::vector<double> dual_coefs;  // alpha_i * y_i
  double bias = 0.0;
  std::string kernel_fingerprint;
  std::string train_checksum;
  std::size_t train_size = 0;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

struct TrainResult {
  TrainedModel model;
  std::vector<double> alpha;
  std::size_t iterations = 0;
  // Final maximal violation.
  double violation = 0.0;
  std::vector<double> objective_trace;
};

// Maximizes sum(alpha) - 1/2 sum_ij alpha_i alpha_j y_i y_j G_ij subject to
// 0 <= alpha_i <= C_i and sum(alpha_i y_i) = 0, by SMO with maximal
// violating pair selection. Throws DataError for malformed input (single
// class, asymmetric or non-square gram, labels not +-1) and
// NumericalError when the iteration cap is hit.
TrainResult TrainSmo(const Matrix& gram, std::span<const int> labels, const TrainConfig& cfg);

// Dual objective for a given alpha.
double DualObjective(const Matrix& gram, std::span<const int> labels, std::span<const double> alpha);

// kernel_row[k] = K(support example k, x), in support order.
double Decision(const TrainedModel& model, std::span<const double> kernel_row);

// Text format, see README.
void SaveModel(const TrainedModel& model, const std::string& path);
TrainedModel LoadModel(const std::string& path);
// Compares the stored fingerprint with `current`. On mismatch throws
// DataError when strict, otherwise writes a warning to `warn` and
// returns false.
bool CheckModelFingerprint(const TrainedModel& model, const KernelConfig& current, bool strict,
                           std::ostream& warn);

// 64-bit FNV-1a, hex encoded.
std::string Checksum(std::string_view data);

}  // namespace cqarank

#endif  // CQARANK_SVM_H_
