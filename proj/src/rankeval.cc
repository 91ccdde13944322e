#include "cqarank/rankeval.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "cqarank/error.h"
#include "cqarank/numfmt.h"

namespace cqarank {

void QueryGroup::Validate() const {
  std::unordered_set<std::string> ids;
  std::unordered_set<int> ranks;
  for (const auto& c : candidates) {
    if (!ids.insert(c.candidate_id).second)
      throw DataError("query " + query_id + ": duplicate candidate id " + c.candidate_id);
    if (!ranks.insert(c.original_rank).second)
      throw DataError("query " + query_id + ": duplicate original rank " + std::to_string(c.original_rank));
  }
}

namespace {

std::vector<std::size_t> RerankOrder(const QueryGroup& group) {
  const auto& cs = group.candidates;
  for (const auto& c : cs)
    if (!c.score) throw DataError("query " + group.query_id + ": candidate " + c.candidate_id + " has no score");
  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (*cs[a].score != *cs[b].score) return *cs[a].score > *cs[b].score;
    return cs[a].original_rank < cs[b].original_rank;
  });
  return order;
}

}  // namespace

std::vector<std::string> Rerank(const QueryGroup& group) {
  std::vector<std::string> ids;
  for (std::size_t i : RerankOrder(group)) ids.push_back(group.candidates[i].candidate_id);
  return ids;
}

std::vector<bool> RankedGold(const QueryGroup& group) {
  std::vector<bool> gold;
  for (std::size_t i : RerankOrder(group)) gold.push_back(group.candidates[i].gold_relevant);
  return gold;
}

double AveragePrecision(const std::vector<bool>& ranked_gold, int k, std::optional<int> total_relevant) {
  if (k < 1) throw ConfigError("average precision: k must be >= 1");
  const int relevant =
      total_relevant.value_or(static_cast<int>(std::count(ranked_gold.begin(), ranked_gold.end(), true)));
  if (relevant <= 0) return 0.0;
  const std::size_t cutoff = std::min(ranked_gold.size(), static_cast<std::size_t>(k));
  double sum = 0.0;
  int hits = 0;
  for (std::size_t i = 0; i < cutoff; ++i) {
    if (!ranked_gold[i]) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(i + 1);
  }
  return sum / static_cast<double>(std::min(relevant, k));
}

std::vector<std::optional<double>> PerQueryAp(std::span<const QueryGroup> groups, int k) {
  std::vector<std::optional<double>> aps;
  for (const auto& g : groups) {
    const auto gold = RankedGold(g);
    if (std::find(gold.begin(), gold.end(), true) == gold.end()) {
      aps.emplace_back();
    } else {
      aps.emplace_back(AveragePrecision(gold, k));
    }
  }
  return aps;
}

Metrics Evaluate(std::span<const QueryGroup> groups, int k) {
  if (groups.empty()) throw DataError("evaluate: empty group list");
  if (k < 1) throw ConfigError("evaluate: k must be >= 1");
  Metrics m;
  double ap_sum = 0.0, rec_sum = 0.0, rr_sum = 0.0;
  for (const auto& g : groups) {
    const auto gold = RankedGold(g);
    const int relevant = static_cast<int>(std::count(gold.begin(), gold.end(), true));
    if (relevant == 0) continue;
    ++m.evaluated_groups;
    ap_sum += AveragePrecision(gold, k);
    const std::size_t cutoff = std::min(gold.size(), static_cast<std::size_t>(k));
    int found = 0;
    double rr = 0.0;
    for (std::size_t i = 0; i < cutoff; ++i) {
      if (!gold[i]) continue;
      if (found == 0) rr = 1.0 / static_cast<double>(i + 1);
      ++found;
    }
    rec_sum += static_cast<double>(found) / static_cast<double>(std::min(relevant, k));
    rr_sum += rr;
  }
  if (m.evaluated_groups > 0) {
    const auto n = static_cast<double>(m.evaluated_groups);
    m.map = 100.0 * ap_sum / n;
    m.avg_rec = 100.0 * rec_sum / n;
    m.mrr = 100.0 * rr_sum / n;
  }
  return m;
}

double RandomizationTest(std::span<const double> a, std::span<const double> b, int resamples,
                         std::uint64_t seed) {
  if (a.size() != b.size())
    throw DataError("randomization test: length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  if (resamples < 1) throw ConfigError("randomization test: resamples must be >= 1");
  if (a.empty()) return 1.0;
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const auto n = static_cast<double>(diff.size());
  auto abs_mean = [&](auto sign) {
    double s = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) s += sign(i) * diff[i];
    return std::abs(s / n);
  };
  const double observed = abs_mean([](std::size_t) { return 1.0; });
  // Sums of sign-flipped values can differ from the observed sum by
  // rounding alone.
  const double slack = 1e-12 * std::max(1.0, observed);
  std::mt19937_64 rng(seed);
  std::vector<double> signs(diff.size());
  int at_least = 0;
  for (int r = 0; r < resamples; ++r) {
    for (auto& s : signs) s = (rng() & 1u) ? -1.0 : 1.0;
    if (abs_mean([&](std::size_t i) { return signs[i]; }) >= observed - slack) ++at_least;
  }
  return (1.0 + at_least) / (1.0 + resamples);
}

void WritePredictions(const std::string& path, std::span<const QueryGroup> groups) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write predictions file " + path);
  for (const auto& g : groups) {
    for (const auto& c : g.candidates) {
      if (!c.score) throw DataError("query " + g.query_id + ": candidate " + c.candidate_id + " has no score");
      out << g.query_id << '\t' << c.candidate_id << '\t' << c.original_rank << '\t'
          << FormatDouble(*c.score) << '\t' << (c.gold_relevant ? "true" : "false") << '\n';
    }
  }
  if (!out) throw DataError("error writing predictions file " + path);
}

std::vector<PredictionRow> ReadPredictionRows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open predictions file " + path);
  std::vector<PredictionRow> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(lineno) + ": ";
    std::vector<std::string> cols;
    std::istringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 5) throw DataError(where + "expected 5 tab-separated columns");
    PredictionRow row;
    row.query_id = cols[0];
    row.candidate_id = cols[1];
    const auto rank = ParseInt(cols[2]);
    const auto score = ParseDouble(cols[3]);
    if (!rank) throw DataError(where + "bad rank '" + cols[2] + "'");
    if (!score) throw DataError(where + "bad score '" + cols[3] + "'");
    if (cols[4] != "true" && cols[4] != "false") throw DataError(where + "gold must be true or false");
    row.rank = static_cast<int>(*rank);
    row.score = *score;
    row.gold = cols[4] == "true";
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<QueryGroup> GroupPredictions(std::span<const PredictionRow> rows) {
  std::vector<QueryGroup> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, inserted] = index.emplace(r.query_id, groups.size());
    if (inserted) groups.push_back(QueryGroup{r.query_id, {}});
    groups[it->second].candidates.push_back(Candidate{r.candidate_id, r.rank, r.gold, r.score});
  }
  for (const auto& g : groups) g.Validate();
  return groups;
}

}  // namespace cqarank
