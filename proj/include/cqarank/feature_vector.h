#ifndef CQARANK_FEATURE_VECTOR_H_
#define CQARANK_FEATURE_VECTOR_H_

#include <string>
#include <vector>

namespace cqarank {

// Named dense features. values and names are parallel; names are unique.
struct FeatureVector {
  std::vector<double> values;
  std::vector<std::string> names;

  std::size_t size() const { return values.size(); }
  void Add(std::string name, double value);
  void Append(const FeatureVector& other);
  // Throws DataError on length mismatch or duplicate names.
  void Validate() const;
};

}  // namespace cqarank

#endif  // CQARANK_FEATURE_VECTOR_H_
