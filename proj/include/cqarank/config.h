#ifndef CQARANK_CONFIG_H_
#define CQARANK_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cqarank/corpus.h"
#include "cqarank/features.h"
#include "cqarank/kernel.h"
#include "cqarank/rel_link.h"
#include "cqarank/svm.h"

namespace cqarank {

// Which question is compared with the comment by the MTE features.
enum class MtePairing { kNewQuestion, kForumQuestion };

struct FeatureConfig {
  // Append the normalized PTK between the pair's own trees to the sim block.
  bool ptk_feature = false;
  RankMode rank_mode = RankMode::kInverse;
  bool embeddings = false;
  bool mte = false;
  MtePairing mte_pairing = MtePairing::kNewQuestion;
  int min_match = 1;
  std::string root_label = "ROOT";
};

struct RunConfig {
  Task task = Task::kB;
  RelConfig rel;
  KernelConfig kernel;
  TrainConfig train;
  FeatureConfig features;
  std::string stopword_path;
  std::string embedding_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  // 0: list length of the task (10 for B, 30 for D).
  int eval_k = 0;
  int sig_resamples = 10000;

  int EffectiveK() const { return eval_k > 0 ? eval_k : MaxRank(task); }
  void Validate() const;
};

// Sets one field from its dotted key, e.g. "kernel.lambda" = "0.4".
// Throws ConfigError for unknown keys or unparsable values.
void ApplySetting(RunConfig& cfg, std::string_view key, std::string_view value);

// All keys accepted by ApplySetting, with a one-line description.
struct SettingInfo {
  std::string key;
  std::string help;
};
const std::vector<SettingInfo>& SettingKeys();

// "key = value" lines; '#' starts a comment; "[section]" prefixes the
// following keys with "section.". Values may be double-quoted.
void LoadConfigFile(RunConfig& cfg, const std::string& path);
void ParseConfigText(RunConfig& cfg, std::string_view text, const std::string& source = "<config>");

// Key/value dump of every setting, loadable by ParseConfigText.
std::string DumpConfig(const RunConfig& cfg);

// Explicit stopword_path, else $CQARANK_STOPWORD_DIR/{english,arabic}.txt
// for task B/D when that file exists, else empty.
std::string ResolveStopwordPath(const RunConfig& cfg);

}  // namespace cqarank

#endif  // CQARANK_CONFIG_H_
