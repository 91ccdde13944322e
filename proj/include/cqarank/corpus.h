#ifndef CQARANK_CORPUS_H_
#define CQARANK_CORPUS_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cqarank {

// B: English question-question similarity, 10 candidates per question.
// D: Arabic question-comment pairs, 30 candidates per question.
enum class Task { kB, kD };

enum class GoldLabel { kPerfectMatch, kRelevant, kIrrelevant, kDirect, kRelated };

const char* ToString(Task task);
const char* ToString(GoldLabel label);
Task ParseTask(std::string_view s);
// Case-insensitive; accepts the canonical names printed by ToString.
GoldLabel ParseGoldLabel(std::string_view s);
// Highest original rank allowed for the task.
int MaxRank(Task task);

// +1 for PerfectMatch/Relevant (task B) and Direct/Related (task D), -1 for
// Irrelevant. Throws DataError for a label outside the task's inventory.
int GoldBinary(GoldLabel label, Task task);

struct CorpusRecord {
  std::string query_id;
  std::string candidate_id;
  int original_rank = 0;
  std::string qo_text;
  std::string qs_text;
  GoldLabel label = GoldLabel::kIrrelevant;
  // Bracketed parses, one per sentence.
  std::optional<std::vector<std::string>> qo_trees;
  std::optional<std::vector<std::string>> qs_trees;
  std::optional<std::string> comment_text;
  // Keys into the embedding table; default to query_id / candidate_id.
  std::optional<std::string> qo_embedding_id;
  std::optional<std::string> qs_embedding_id;
  // 1-based line in the source file.
  int line = 0;
};

// JSONL, one record per line (see README for the field list). Rejects an
// empty corpus, duplicate (query_id, candidate_id) keys, repeated ranks
// within a query, ranks outside [1, MaxRank(task)] and labels outside the
// task's inventory. Errors name the file and line.
std::vector<CorpusRecord> LoadCorpus(const std::string& path, Task task);
std::vector<CorpusRecord> ParseCorpus(std::string_view jsonl, Task task,
                                      const std::string& source = "<corpus>");

struct ClassCounts {
  std::size_t positive = 0;
  std::size_t negative = 0;
};
ClassCounts CountClasses(std::span<const CorpusRecord> records, Task task);

// Record indices per query, queries in order of first appearance and
// records in file order.
struct RecordGroup {
  std::string query_id;
  std::vector<std::size_t> records;
};
std::vector<RecordGroup> GroupByQuery(std::span<const CorpusRecord> records);

}  // namespace cqarank

#endif  // CQARANK_CORPUS_H_
