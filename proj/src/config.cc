#include "cqarank/config.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cqarank/error.h"
#include "cqarank/numfmt.h"

namespace cqarank {

void RunConfig::Validate() const {
  rel.Validate();
  kernel.Validate();
  train.Validate();
  if (features.min_match < 1) throw ConfigError("features.min_match must be >= 1");
  if (features.root_label.empty()) throw ConfigError("features.root_label must be non-empty");
  if (eval_k < 0) throw ConfigError("eval_k must be >= 0");
  if (sig_resamples < 1) throw ConfigError("sig_resamples must be >= 1");
  if (kernel.use_vec && !features.embeddings && !features.mte)
    throw ConfigError("kernel.use_vec needs features.embeddings or features.mte");
  if (features.embeddings && embedding_path.empty())
    throw ConfigError("features.embeddings needs an embedding file");
}

namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string Upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

bool ToBool(std::string_view key, std::string_view v) {
  const std::string u = Upper(v);
  if (u == "1" || u == "TRUE" || u == "YES" || u == "ON") return true;
  if (u == "0" || u == "FALSE" || u == "NO" || u == "OFF") return false;
  throw ConfigError(std::string(key) + ": expected a boolean, got '" + std::string(v) + "'");
}

double ToDouble(std::string_view key, std::string_view v) {
  const auto d = ParseDouble(v);
  if (!d) throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
  return *d;
}

long long ToInt(std::string_view key, std::string_view v) {
  const auto i = ParseInt(v);
  if (!i) throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(v) + "'");
  return *i;
}

struct Setting {
  std::string help;
  std::function<void(RunConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const RunConfig&)> get;
};

std::string B(bool b) { return b ? "true" : "false"; }

const std::map<std::string, Setting>& Settings() {
  static const std::map<std::string, Setting> settings = [] {
    std::map<std::string, Setting> s;
    s["task"] = {"B (question-question) or D (question-comment)",
                 [](RunConfig& c, auto, auto v) { c.task = ParseTask(v); },
                 [](const RunConfig& c) { return std::string(ToString(c.task)); }};
    s["seed"] = {"seed for SMO tie-breaking and significance resampling",
                 [](RunConfig& c, auto k, auto v) { c.seed = static_cast<std::uint64_t>(ToInt(k, v)); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }};
    s["threads"] = {"kernel worker threads (0 = all cores)",
                    [](RunConfig& c, auto k, auto v) { c.threads = static_cast<unsigned>(ToInt(k, v)); },
                    [](const RunConfig& c) { return std::to_string(c.threads); }};
    s["eval_k"] = {"metric cutoff (0 = 10 for B, 30 for D)",
                   [](RunConfig& c, auto k, auto v) { c.eval_k = static_cast<int>(ToInt(k, v)); },
                   [](const RunConfig& c) { return std::to_string(c.eval_k); }};
    s["sig_resamples"] = {"randomization test resamples",
                          [](RunConfig& c, auto k, auto v) { c.sig_resamples = static_cast<int>(ToInt(k, v)); },
                          [](const RunConfig& c) { return std::to_string(c.sig_resamples); }};
    s["stopwords"] = {"stopword file, one token per line",
                      [](RunConfig& c, auto, auto v) { c.stopword_path = v; },
                      [](const RunConfig& c) { return c.stopword_path; }};
    s["embeddings"] = {"embedding file, id<TAB>v1 ... vd",
                       [](RunConfig& c, auto, auto v) { c.embedding_path = v; },
                       [](const RunConfig& c) { return c.embedding_path; }};

    s["rel.phrase_labels"] = {"comma-separated phrase labels eligible for REL tags",
                              [](RunConfig& c, auto, auto v) {
                                c.rel.phrase_labels.clear();
                                std::stringstream ss{std::string(v)};
                                std::string item;
                                while (std::getline(ss, item, ','))
                                  if (auto t = Trim(item); !t.empty()) c.rel.phrase_labels.insert(t);
                              },
                              [](const RunConfig& c) {
                                std::string out;
                                for (const auto& l : c.rel.phrase_labels) out += (out.empty() ? "" : ",") + l;
                                return out;
                              }};
    s["rel.case_insensitive"] = {"case-fold tokens before REL matching",
                                 [](RunConfig& c, auto k, auto v) { c.rel.match_case_insensitive = ToBool(k, v); },
                                 [](const RunConfig& c) { return B(c.rel.match_case_insensitive); }};
    s["rel.min_shared_tokens"] = {"shared non-stopword tokens needed for a REL tag",
                                  [](RunConfig& c, auto k, auto v) { c.rel.min_shared_tokens = static_cast<int>(ToInt(k, v)); },
                                  [](const RunConfig& c) { return std::to_string(c.rel.min_shared_tokens); }};

    s["kernel.tk"] = {"tree kernel: STK or PTK",
                      [](RunConfig& c, auto k, auto v) {
                        const auto u = Upper(v);
                        if (u == "STK") c.kernel.tk_kind = TreeKernelKind::kStk;
                        else if (u == "PTK") c.kernel.tk_kind = TreeKernelKind::kPtk;
                        else throw ConfigError(std::string(k) + ": expected STK or PTK");
                      },
                      [](const RunConfig& c) { return std::string(ToString(c.kernel.tk_kind)); }};
    s["kernel.lambda"] = {"tree kernel decay, (0,1]",
                          [](RunConfig& c, auto k, auto v) { c.kernel.lambda = ToDouble(k, v); },
                          [](const RunConfig& c) { return FormatDouble(c.kernel.lambda); }};
    s["kernel.mu"] = {"PTK depth decay, (0,1]",
                      [](RunConfig& c, auto k, auto v) { c.kernel.mu = ToDouble(k, v); },
                      [](const RunConfig& c) { return FormatDouble(c.kernel.mu); }};
    s["kernel.gamma"] = {"RBF width, or 'auto' for 1/dimension per block",
                         [](RunConfig& c, auto k, auto v) {
                           if (Upper(v) == "AUTO") c.kernel.gamma.reset();
                           else c.kernel.gamma = ToDouble(k, v);
                         },
                         [](const RunConfig& c) {
                           return c.kernel.gamma ? FormatDouble(*c.kernel.gamma) : std::string("auto");
                         }};
    s["kernel.rank_kernel"] = {"kernel on the rank feature: LINEAR or RBF",
                               [](RunConfig& c, auto k, auto v) {
                                 const auto u = Upper(v);
                                 if (u == "LINEAR") c.kernel.rank_kernel = RankKernel::kLinear;
                                 else if (u == "RBF") c.kernel.rank_kernel = RankKernel::kRbf;
                                 else throw ConfigError(std::string(k) + ": expected LINEAR or RBF");
                               },
                               [](const RunConfig& c) { return std::string(ToString(c.kernel.rank_kernel)); }};
    s["kernel.normalize_tk"] = {"normalize each tree kernel summand",
                                [](RunConfig& c, auto k, auto v) { c.kernel.normalize_tk = ToBool(k, v); },
                                [](const RunConfig& c) { return B(c.kernel.normalize_tk); }};
    s["kernel.use_sim"] = {"RBF kernel on the similarity block",
                           [](RunConfig& c, auto k, auto v) { c.kernel.use_sim = ToBool(k, v); },
                           [](const RunConfig& c) { return B(c.kernel.use_sim); }};
    s["kernel.use_tk"] = {"pair tree kernel on the REL-linked trees",
                          [](RunConfig& c, auto k, auto v) { c.kernel.use_tk = ToBool(k, v); },
                          [](const RunConfig& c) { return B(c.kernel.use_tk); }};
    s["kernel.use_rank"] = {"kernel on the rank feature",
                            [](RunConfig& c, auto k, auto v) { c.kernel.use_rank = ToBool(k, v); },
                            [](const RunConfig& c) { return B(c.kernel.use_rank); }};
    s["kernel.use_vec"] = {"linear kernel on the embedding/MTE block",
                           [](RunConfig& c, auto k, auto v) { c.kernel.use_vec = ToBool(k, v); },
                           [](const RunConfig& c) { return B(c.kernel.use_vec); }};

    s["train.C"] = {"SVM C",
                    [](RunConfig& c, auto k, auto v) { c.train.C = ToDouble(k, v); },
                    [](const RunConfig& c) { return FormatDouble(c.train.C); }};
    s["train.tol"] = {"KKT violation tolerance",
                      [](RunConfig& c, auto k, auto v) { c.train.tol = ToDouble(k, v); },
                      [](const RunConfig& c) { return FormatDouble(c.train.tol); }};
    s["train.eps"] = {"support vector threshold on alpha",
                      [](RunConfig& c, auto k, auto v) { c.train.eps = ToDouble(k, v); },
                      [](const RunConfig& c) { return FormatDouble(c.train.eps); }};
    s["train.max_passes"] = {"iteration cap, in multiples of the training set size",
                             [](RunConfig& c, auto k, auto v) { c.train.max_passes = static_cast<int>(ToInt(k, v)); },
                             [](const RunConfig& c) { return std::to_string(c.train.max_passes); }};
    s["train.positive_weight"] = {"C multiplier for relevant examples",
                                  [](RunConfig& c, auto k, auto v) { c.train.positive_weight = ToDouble(k, v); },
                                  [](const RunConfig& c) { return FormatDouble(c.train.positive_weight); }};
    s["train.negative_weight"] = {"C multiplier for irrelevant examples",
                                  [](RunConfig& c, auto k, auto v) { c.train.negative_weight = ToDouble(k, v); },
                                  [](const RunConfig& c) { return FormatDouble(c.train.negative_weight); }};

    s["features.ptk_feature"] = {"append the normalized PTK of the pair to the sim block",
                                 [](RunConfig& c, auto k, auto v) { c.features.ptk_feature = ToBool(k, v); },
                                 [](const RunConfig& c) { return B(c.features.ptk_feature); }};
    s["features.rank_mode"] = {"rank feature: AS_IS (pos) or INVERSE (1/pos)",
                               [](RunConfig& c, auto k, auto v) {
                                 const auto u = Upper(v);
                                 if (u == "AS_IS") c.features.rank_mode = RankMode::kAsIs;
                                 else if (u == "INVERSE") c.features.rank_mode = RankMode::kInverse;
                                 else throw ConfigError(std::string(k) + ": expected AS_IS or INVERSE");
                               },
                               [](const RunConfig& c) { return std::string(ToString(c.features.rank_mode)); }};
    s["features.embeddings"] = {"add [v_new || v_forum] to the vec block",
                                [](RunConfig& c, auto k, auto v) { c.features.embeddings = ToBool(k, v); },
                                [](const RunConfig& c) { return B(c.features.embeddings); }};
    s["features.mte"] = {"add the 7 MTE scores to the vec block",
                         [](RunConfig& c, auto k, auto v) { c.features.mte = ToBool(k, v); },
                         [](const RunConfig& c) { return B(c.features.mte); }};
    s["features.mte_pairing"] = {"question compared with the comment: NEW or FORUM",
                                 [](RunConfig& c, auto k, auto v) {
                                   const auto u = Upper(v);
                                   if (u == "NEW") c.features.mte_pairing = MtePairing::kNewQuestion;
                                   else if (u == "FORUM") c.features.mte_pairing = MtePairing::kForumQuestion;
                                   else throw ConfigError(std::string(k) + ": expected NEW or FORUM");
                                 },
                                 [](const RunConfig& c) {
                                   return std::string(c.features.mte_pairing == MtePairing::kNewQuestion ? "NEW" : "FORUM");
                                 }};
    s["features.min_match"] = {"greedy string tiling minimum match length",
                               [](RunConfig& c, auto k, auto v) { c.features.min_match = static_cast<int>(ToInt(k, v)); },
                               [](const RunConfig& c) { return std::to_string(c.features.min_match); }};
    s["features.root_label"] = {"label of the macro-tree root",
                                [](RunConfig& c, auto, auto v) { c.features.root_label = v; },
                                [](const RunConfig& c) { return c.features.root_label; }};
    return s;
  }();
  return settings;
}

}  // namespace

void ApplySetting(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto& settings = Settings();
  auto it = settings.find(std::string(key));
  if (it == settings.end()) throw ConfigError("unknown setting '" + std::string(key) + "'");
  it->second.set(cfg, key, value);
}

const std::vector<SettingInfo>& SettingKeys() {
  static const std::vector<SettingInfo> keys = [] {
    std::vector<SettingInfo> out;
    for (const auto& [k, s] : Settings()) out.push_back({k, s.help});
    return out;
  }();
  return keys;
}

void ParseConfigText(RunConfig& cfg, std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string t = Trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + "unterminated section header");
      section = Trim(std::string_view(t).substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    std::string key = Trim(std::string_view(t).substr(0, eq));
    std::string value = Trim(std::string_view(t).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    try {
      ApplySetting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
}

void LoadConfigFile(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  ParseConfigText(cfg, buf.str(), path);
}

std::string DumpConfig(const RunConfig& cfg) {
  std::string out;
  for (const auto& [k, s] : Settings()) out += k + " = \"" + s.get(cfg) + "\"\n";
  return out;
}

std::string ResolveStopwordPath(const RunConfig& cfg) {
  if (!cfg.stopword_path.empty()) return cfg.stopword_path;
  const char* dir = std::getenv("CQARANK_STOPWORD_DIR");
  if (dir == nullptr || *dir == '\0') return "";
  const auto path = std::filesystem::path(dir) / (cfg.task == Task::kB ? "english.txt" : "arabic.txt");
  return std::filesystem::exists(path) ? path.string() : "";
}

}  // namespace cqarank
