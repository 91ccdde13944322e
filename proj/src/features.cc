#include "cqarank/features.h"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "cqarank/error.h"
#include "cqarank/numfmt.h"

namespace cqarank {

void FeatureVector::Add(std::string name, double value) {
  names.push_back(std::move(name));
  values.push_back(value);
}

void FeatureVector::Append(const FeatureVector& other) {
  names.insert(names.end(), other.names.begin(), other.names.end());
  values.insert(values.end(), other.values.begin(), other.values.end());
}

void FeatureVector::Validate() const {
  if (names.size() != values.size()) throw DataError("feature vector: names/values length mismatch");
  std::unordered_set<std::string> seen;
  for (const auto& n : names)
    if (!seen.insert(n).second) throw DataError("feature vector: duplicate name " + n);
}

const char* ToString(RankMode mode) { return mode == RankMode::kAsIs ? "AS_IS" : "INVERSE"; }

double RankFeature(int pos, RankMode mode) {
  if (pos < 1) throw DataError("rank feature: position must be >= 1, got " + std::to_string(pos));
  return mode == RankMode::kAsIs ? static_cast<double>(pos) : 1.0 / pos;
}

double PtkFeature(const KernelTree& tree_o_rel, const KernelTree& tree_s_rel, const KernelConfig& cfg) {
  const double k = Ptk(tree_o_rel, tree_s_rel, cfg.lambda, cfg.mu);
  return NormalizeKernel(k, Ptk(tree_o_rel, tree_o_rel, cfg.lambda, cfg.mu),
                         Ptk(tree_s_rel, tree_s_rel, cfg.lambda, cfg.mu));
}

double PtkFeature(const SyntaxTree& tree_o_rel, const SyntaxTree& tree_s_rel, const KernelConfig& cfg) {
  return PtkFeature(KernelTree(tree_o_rel), KernelTree(tree_s_rel), cfg);
}

std::vector<double> EmbeddingPair(std::span<const double> v_new, std::span<const double> v_forum) {
  if (v_new.size() != v_forum.size())
    throw DataError("embedding pair: dimension mismatch (" + std::to_string(v_new.size()) + " vs " +
                    std::to_string(v_forum.size()) + ")");
  std::vector<double> out(v_new.begin(), v_new.end());
  out.insert(out.end(), v_forum.begin(), v_forum.end());
  return out;
}

void EmbeddingTable::Insert(const std::string& id, std::vector<double> v) {
  if (v.empty()) throw DataError("embedding " + id + ": empty vector");
  if (dimension_ == 0) dimension_ = v.size();
  if (v.size() != dimension_)
    throw DataError("embedding " + id + ": dimension " + std::to_string(v.size()) + ", expected " +
                    std::to_string(dimension_));
  if (!table_.emplace(id, std::move(v)).second) throw DataError("embedding " + id + ": duplicate id");
}

const std::vector<double>& EmbeddingTable::at(const std::string& id) const {
  auto it = table_.find(id);
  if (it == table_.end()) throw DataError("no embedding for id " + id);
  return it->second;
}

EmbeddingTable EmbeddingTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  EmbeddingTable table;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    if (tab == std::string::npos || tab == 0) throw DataError(where + "expected id<TAB>values");
    std::vector<double> v;
    std::istringstream values(line.substr(tab + 1));
    std::string cell;
    while (values >> cell) {
      const auto x = ParseDouble(cell);
      if (!x) throw DataError(where + "bad number '" + cell + "'");
      v.push_back(*x);
    }
    try {
      table.Insert(line.substr(0, tab), std::move(v));
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
  }
  return table;
}

}  // namespace cqarank
