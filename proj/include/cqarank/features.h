#ifndef CQARANK_FEATURES_H_
#define CQARANK_FEATURES_H_

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cqarank/feature_vector.h"
#include "cqarank/kernel.h"

namespace cqarank {

enum class RankMode { kAsIs, kInverse };

const char* ToString(RankMode mode);

// Search-engine position as a feature: pos, or 1/pos.
double RankFeature(int pos, RankMode mode);

// Normalized PTK between the two REL-linked trees of one pair,
// TK(t(qo,qs), t(qs,qo)). Uses cfg.lambda and cfg.mu; tk_kind is ignored.
double PtkFeature(const KernelTree& tree_o_rel, const KernelTree& tree_s_rel, const KernelConfig& cfg);
double PtkFeature(const SyntaxTree& tree_o_rel, const SyntaxTree& tree_s_rel, const KernelConfig& cfg);

// [v_new || v_forum]. Throws DataError when the dimensions differ.
std::vector<double> EmbeddingPair(std::span<const double> v_new, std::span<const double> v_forum);

// Vectors keyed by question id, all of the same dimension.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  // Lines "id<TAB>v1 v2 ... vd". Throws DataError with the line number on
  // malformed input or inconsistent dimension.
  static EmbeddingTable Load(const std::string& path);

  void Insert(const std::string& id, std::vector<double> v);
  // Throws DataError on unknown id.
  const std::vector<double>& at(const std::string& id) const;
  bool contains(const std::string& id) const { return table_.contains(id); }
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::unordered_map<std::string, std::vector<double>> table_;
  std::size_t dimension_ = 0;
};

}  // namespace cqarank

#endif  // CQARANK_FEATURES_H_
