#ifndef CQARANK_RANKEVAL_H_
#define CQARANK_RANKEVAL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cqarank {

struct Candidate {
  std::string candidate_id;
  int original_rank = 0;
  bool gold_relevant = false;
  std::optional<double> score;
};

// One original question and its retrieved candidates. Candidate ids and
// original ranks are unique within a group.
struct QueryGroup {
  std::string query_id;
  std::vector<Candidate> candidates;

  void Validate() const;
};

// Candidate ids by descending score, ties by ascending original rank.
// Throws DataError if a score is missing.
std::vector<std::string> Rerank(const QueryGroup& group);

// Gold flags of the group in reranked order.
std::vector<bool> RankedGold(const QueryGroup& group);

// Sum over relevant positions i <= k of precision@i, divided by
// min(total_relevant, k). total_relevant defaults to the count in the
// whole list. Returns 0 when there is nothing relevant.
double AveragePrecision(const std::vector<bool>& ranked_gold, int k,
                        std::optional<int> total_relevant = std::nullopt);

struct Metrics {
  double map = 0.0;
  double avg_rec = 0.0;
  double mrr = 0.0;
  // Groups with at least one relevant candidate (the MAP/AvgRec population).
  std::size_t evaluated_groups = 0;
};

// Per-group AP (in [0,1]) of the reranked groups; groups without any
// relevant candidate get std::nullopt.
std::vector<std::optional<double>> PerQueryAp(std::span<const QueryGroup> groups, int k);

// MAP, AvgRec, MRR scaled to [0,100], each averaged over the groups with
// at least one relevant candidate. AvgRec is relevant-in-top-k / min(R,k);
// reciprocal rank is 0 when nothing relevant is in the top k. Throws
// DataError on an empty group list.
Metrics Evaluate(std::span<const QueryGroup> groups, int k);

// Two-sided paired sign-flip randomization test on per-query scores.
// p = (1 + #{resamples with |mean diff| >= observed}) / (1 + resamples).
double RandomizationTest(std::span<const double> a, std::span<const double> b, int resamples,
                         std::uint64_t seed);

// Predictions TSV: query_id, candidate_id, rank, score, true|false.
struct PredictionRow {
  std::string query_id;
  std::string candidate_id;
  int rank = 0;
  double score = 0.0;
  bool gold = false;
};

void WritePredictions(const std::string& path, std::span<const QueryGroup> groups);
std::vector<PredictionRow> ReadPredictionRows(const std::string& path);
// Groups in order of first appearance, candidates in file order.
std::vector<QueryGroup> GroupPredictions(std::span<const PredictionRow> rows);

}  // namespace cqarank

#endif  // CQARANK_RANKEVAL_H_
