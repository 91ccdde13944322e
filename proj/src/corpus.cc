#include "cqarank/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "cqarank/error.h"
#include "json.hpp"

namespace cqarank {

using nlohmann::json;

const char* ToString(Task task) { return task == Task::kB ? "B" : "D"; }

const char* ToString(GoldLabel label) {
  switch (label) {
    case GoldLabel::kPerfectMatch: return "PerfectMatch";
    case GoldLabel::kRelevant: return "Relevant";
    case GoldLabel::kIrrelevant: return "Irrelevant";
    case GoldLabel::kDirect: return "Direct";
    case GoldLabel::kRelated: return "Related";
  }
  return "?";
}

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

Task ParseTask(std::string_view s) {
  const std::string l = Lower(s);
  if (l == "b") return Task::kB;
  if (l == "d") return Task::kD;
  throw ConfigError("unknown task '" + std::string(s) + "' (expected B or D)");
}

GoldLabel ParseGoldLabel(std::string_view s) {
  const std::string l = Lower(s);
  for (auto label : {GoldLabel::kPerfectMatch, GoldLabel::kRelevant, GoldLabel::kIrrelevant,
                     GoldLabel::kDirect, GoldLabel::kRelated}) {
    if (l == Lower(ToString(label))) return label;
  }
  throw DataError("unknown gold label '" + std::string(s) + "'");
}

int MaxRank(Task task) { return task == Task::kB ? 10 : 30; }

int GoldBinary(GoldLabel label, Task task) {
  if (task == Task::kB) {
    switch (label) {
      case GoldLabel::kPerfectMatch:
      case GoldLabel::kRelevant: return 1;
      case GoldLabel::kIrrelevant: return -1;
      default: break;
    }
  } else {
    switch (label) {
      case GoldLabel::kDirect:
      case GoldLabel::kRelated: return 1;
      case GoldLabel::kIrrelevant: return -1;
      default: break;
    }
  }
  throw DataError(std::string("label ") + ToString(label) + " is not valid for task " + ToString(task));
}

namespace {

std::string RequireString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(std::string("missing field '") + key + "'");
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> OptionalString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw DataError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::vector<std::string>> OptionalStrings(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_array()) throw DataError(std::string("field '") + key + "' must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : *it) {
    if (!e.is_string()) throw DataError(std::string("field '") + key + "' must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

CorpusRecord ParseRecord(const json& j, Task task) {
  if (!j.is_object()) throw DataError("record must be a JSON object");
  CorpusRecord r;
  r.query_id = RequireString(j, "query_id");
  r.candidate_id = RequireString(j, "candidate_id");
  auto rank = j.find("rank");
  if (rank == j.end() || !rank->is_number_integer()) throw DataError("missing or non-integer field 'rank'");
  r.original_rank = rank->get<int>();
  if (r.original_rank < 1 || r.original_rank > MaxRank(task))
    throw DataError("rank " + std::to_string(r.original_rank) + " outside [1," +
                    std::to_string(MaxRank(task)) + "] for task " + ToString(task));
  r.qo_text = RequireString(j, "qo_text");
  r.qs_text = RequireString(j, "qs_text");
  r.label = ParseGoldLabel(RequireString(j, "label"));
  GoldBinary(r.label, task);
  r.qo_trees = OptionalStrings(j, "qo_trees");
  r.qs_trees = OptionalStrings(j, "qs_trees");
  r.comment_text = OptionalString(j, "comment_text");
  r.qo_embedding_id = OptionalString(j, "qo_embedding_id");
  r.qs_embedding_id = OptionalString(j, "qs_embedding_id");
  return r;
}

}  // namespace

std::vector<CorpusRecord> ParseCorpus(std::string_view jsonl, Task task, const std::string& source) {
  std::vector<CorpusRecord> records;
  std::map<std::pair<std::string, std::string>, int> keys;
  std::unordered_map<std::string, std::map<int, int>> ranks;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    CorpusRecord r;
    try {
      r = ParseRecord(json::parse(line), task);
    } catch (const json::exception& e) {
      throw DataError(where + "invalid JSON: " + e.what());
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    r.line = lineno;
    auto [k, fresh] = keys.emplace(std::make_pair(r.query_id, r.candidate_id), lineno);
    if (!fresh)
      throw DataError(where + "duplicate (query_id, candidate_id) = (" + r.query_id + ", " + r.candidate_id +
                      "), first seen on line " + std::to_string(k->second));
    auto [rk, rank_fresh] = ranks[r.query_id].emplace(r.original_rank, lineno);
    if (!rank_fresh)
      throw DataError(where + "rank " + std::to_string(r.original_rank) + " repeated in query " + r.query_id +
                      " (line " + std::to_string(rk->second) + ")");
    records.push_back(std::move(r));
  }
  if (records.empty()) throw DataError(source + ": empty corpus");
  return records;
}

std::vector<CorpusRecord> LoadCorpus(const std::string& path, Task task) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseCorpus(buf.str(), task, path);
}

ClassCounts CountClasses(std::span<const CorpusRecord> records, Task task) {
  ClassCounts c;
  for (const auto& r : records) (GoldBinary(r.label, task) > 0 ? c.positive : c.negative)++;
  return c;
}

std::vector<RecordGroup> GroupByQuery(std::span<const CorpusRecord> records) {
  std::vector<RecordGroup> groups;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, fresh] = index.emplace(records[i].query_id, groups.size());
    if (fresh) groups.push_back({records[i].query_id, {}});
    groups[it->second].records.push_back(i);
  }
  return groups;
}

}  // namespace cqarank
