#ifndef CQARANK_ERROR_H_
#define CQARANK_ERROR_H_

#include <stdexcept>
#include <string>

namespace cqarank {

// Malformed input: bad files, schema violations, inconsistent examples.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The optimizer or a kernel produced something unusable (non-convergence,
// degenerate self-kernel, non-symmetric Gram matrix).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration values.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace cqarank

#endif  // CQARANK_ERROR_H_
