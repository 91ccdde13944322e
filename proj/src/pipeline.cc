#include "cqarank/pipeline.h"

#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "cqarank/error.h"
#include "cqarank/mte.h"
#include "cqarank/similarity.h"
#include "json.hpp"

namespace cqarank {

Resources Resources::Load(const RunConfig& cfg) {
  Resources r;
  if (const std::string sw = ResolveStopwordPath(cfg); !sw.empty()) r.stopwords = LoadStopwords(sw);
  if (cfg.features.embeddings) r.embeddings = EmbeddingTable::Load(cfg.embedding_path);
  return r;
}

namespace {

std::string Where(const CorpusRecord& r) {
  return "record " + r.query_id + "/" + r.candidate_id + " (line " + std::to_string(r.line) + ")";
}

SyntaxTree ParseMacro(const std::vector<std::string>& sentences, const RunConfig& cfg, const CorpusRecord& r) {
  std::vector<SyntaxTree> trees;
  for (const auto& s : sentences) {
    try {
      trees.push_back(ParseBracketed(s));
    } catch (const DataError& e) {
      throw DataError(Where(r) + ": " + e.what());
    }
  }
  if (trees.empty()) throw DataError(Where(r) + ": empty tree list");
  return MacroTree(trees, cfg.features.root_label);
}

}  // namespace

ExampleSet BuildExamples(std::span<const CorpusRecord> records, const RunConfig& cfg, const Resources& res) {
  cfg.Validate();
  RelConfig rel = cfg.rel;
  rel.stopwords = res.stopwords;
  const bool need_trees = cfg.kernel.use_tk || cfg.features.ptk_feature;
  const bool want_vec = cfg.features.embeddings || cfg.features.mte;

  ExampleSet out;
  out.examples.reserve(records.size());
  for (const auto& r : records) {
    Example e;
    e.query_id = r.query_id;
    e.candidate_id = r.candidate_id;
    e.original_rank = r.original_rank;
    e.label = GoldBinary(r.label, cfg.task);
    e.rank = RankFeature(r.original_rank, cfg.features.rank_mode);

    FeatureVector sim = SimilarityVector(r.qo_text, r.qs_text, SimilarityConfig{res.stopwords, cfg.features.min_match});

    if (r.qo_trees && r.qs_trees) {
      const SyntaxTree qo = ParseMacro(*r.qo_trees, cfg, r);
      const SyntaxTree qs = ParseMacro(*r.qs_trees, cfg, r);
      e.tree_o = std::make_shared<const KernelTree>(RelLink(qo, qs, rel));
      e.tree_s = std::make_shared<const KernelTree>(RelLink(qs, qo, rel));
    } else if (need_trees) {
      throw DataError(Where(r) + ": trees required by the configuration are missing");
    }
    if (cfg.features.ptk_feature) sim.Add("ptk_pair", PtkFeature(*e.tree_o, *e.tree_s, cfg.kernel));
    e.sim = sim.values;

    if (want_vec) {
      FeatureVector vec;
      if (cfg.features.embeddings) {
        const std::string qo_id = r.qo_embedding_id.value_or(r.query_id);
        const std::string qs_id = r.qs_embedding_id.value_or(r.candidate_id);
        try {
          const auto joined = EmbeddingPair(res.embeddings.at(qo_id), res.embeddings.at(qs_id));
          const std::size_t d = res.embeddings.dimension();
          for (std::size_t i = 0; i < joined.size(); ++i)
            vec.Add((i < d ? "emb_new_" : "emb_forum_") + std::to_string(i % d), joined[i]);
        } catch (const DataError& err) {
          throw DataError(Where(r) + ": " + err.what());
        }
      }
      if (cfg.features.mte) {
        if (!r.comment_text) throw DataError(Where(r) + ": MTE features need comment_text");
        const std::string& question =
            cfg.features.mte_pairing == MtePairing::kNewQuestion ? r.qo_text : r.qs_text;
        try {
          vec.Append(MteVector(Tokenize(question), Tokenize(*r.comment_text)));
        } catch (const DataError& err) {
          throw DataError(Where(r) + ": " + err.what());
        }
      }
      if (out.layout.vec_names.empty()) out.layout.vec_names = vec.names;
      e.vec = std::move(vec.values);
    }
    if (out.layout.sim_names.empty()) out.layout.sim_names = sim.names;
    out.examples.push_back(std::move(e));
  }
  return out;
}

std::string TrainingChecksum(std::span<const Example> train) {
  std::string buf;
  for (const auto& e : train) {
    buf += e.query_id;
    buf += '\x1f';
    buf += e.candidate_id;
    buf += '\x1f';
    buf += std::to_string(e.label);
    buf += '\n';
  }
  return Checksum(buf);
}

TrainResult TrainModel(std::span<const Example> train, const Matrix& gram, const RunConfig& cfg) {
  std::vector<int> labels;
  labels.reserve(train.size());
  for (const auto& e : train) labels.push_back(e.label);
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  TrainResult result = TrainSmo(gram, labels, tc);
  result.model.kernel_fingerprint = cfg.kernel.Fingerprint();
  result.model.train_checksum = TrainingChecksum(train);
  return result;
}

std::vector<double> ScoreExamples(const TrainedModel& model, std::span<const Example> train,
                                  std::span<const Example> test, const RunConfig& cfg) {
  if (model.train_size != train.size())
    throw DataError("model was trained on " + std::to_string(model.train_size) + " examples, got " +
                    std::to_string(train.size()));
  if (!model.train_checksum.empty() && model.train_checksum != TrainingChecksum(train))
    throw DataError("training corpus does not match the one the model was trained on");
  std::vector<Example> support;
  support.reserve(model.support_indices.size());
  for (std::size_t i : model.support_indices) support.push_back(train[i]);
  std::vector<double> scores;
  scores.reserve(test.size());
  if (support.empty()) {
    scores.assign(test.size(), model.bias);
    return scores;
  }
  const Matrix k = CrossKernel(test, support, cfg.kernel, cfg.threads);
  for (std::size_t i = 0; i < test.size(); ++i) scores.push_back(Decision(model, k.row(i)));
  return scores;
}

std::vector<QueryGroup> ScoredGroups(std::span<const CorpusRecord> records, std::span<const double> scores,
                                     Task task) {
  if (scores.size() != records.size()) throw DataError("score count does not match record count");
  std::vector<QueryGroup> groups;
  for (const auto& rg : GroupByQuery(records)) {
    QueryGroup g{rg.query_id, {}};
    for (std::size_t i : rg.records) {
      const auto& r = records[i];
      g.candidates.push_back(Candidate{r.candidate_id, r.original_rank, GoldBinary(r.label, task) > 0, scores[i]});
    }
    g.Validate();
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<double> BaselineScores(std::span<const CorpusRecord> records) {
  std::vector<double> s;
  s.reserve(records.size());
  for (const auto& r : records) s.push_back(RankFeature(r.original_rank, RankMode::kInverse));
  return s;
}

void PairedAp(std::span<const QueryGroup> a, std::span<const QueryGroup> b, int k, std::vector<double>& ap_a,
              std::vector<double>& ap_b) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < b.size(); ++i) index.emplace(b[i].query_id, i);
  const auto aps_a = PerQueryAp(a, k);
  const auto aps_b = PerQueryAp(b, k);
  ap_a.clear();
  ap_b.clear();
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = index.find(a[i].query_id);
    if (it == index.end()) throw DataError("query " + a[i].query_id + " missing from the second run");
    if (!aps_a[i] || !aps_b[it->second]) continue;
    ap_a.push_back(*aps_a[i]);
    ap_b.push_back(*aps_b[it->second]);
  }
}

namespace {

nlohmann::json MetricsJson(const Metrics& m) {
  return {{"MAP", m.map}, {"AvgRec", m.avg_rec}, {"MRR", m.mrr}, {"evaluated_queries", m.evaluated_groups}};
}

}  // namespace

ExperimentResult RunExperiment(const std::string& train_path, const std::string& test_path,
                               const RunConfig& cfg, const std::string& out_dir) {
  cfg.Validate();
  const Resources res = Resources::Load(cfg);
  const auto train_records = LoadCorpus(train_path, cfg.task);
  const auto test_records = LoadCorpus(test_path, cfg.task);
  const auto train = BuildExamples(train_records, cfg, res);
  const auto test = BuildExamples(test_records, cfg, res);

  const Matrix gram = GramMatrix(train.examples, cfg.kernel, cfg.threads);
  const TrainResult trained = TrainModel(train.examples, gram, cfg);
  const auto scores = ScoreExamples(trained.model, train.examples, test.examples, cfg);

  ExperimentResult result;
  result.train_counts = CountClasses(train_records, cfg.task);
  result.test_counts = CountClasses(test_records, cfg.task);
  result.iterations = trained.iterations;
  result.support_vectors = trained.model.support_indices.size();
  result.groups = ScoredGroups(test_records, scores, cfg.task);
  const auto baseline_groups = ScoredGroups(test_records, BaselineScores(test_records), cfg.task);
  const int k = cfg.EffectiveK();
  result.model = Evaluate(result.groups, k);
  result.baseline = Evaluate(baseline_groups, k);
  std::vector<double> ap_model, ap_base;
  PairedAp(result.groups, baseline_groups, k, ap_model, ap_base);
  result.p_value = RandomizationTest(ap_model, ap_base, cfg.sig_resamples, cfg.seed);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    WritePredictions((dir / "predictions.tsv").string(), result.groups);
    WritePredictions((dir / "baseline.tsv").string(), baseline_groups);
    nlohmann::json report = {
        {"task", ToString(cfg.task)},
        {"kernel_fingerprint", cfg.kernel.Fingerprint()},
        {"seed", cfg.seed},
        {"k", k},
        {"train", {{"path", train_path}, {"relevant", result.train_counts.positive}, {"irrelevant", result.train_counts.negative}}},
        {"test", {{"path", test_path}, {"relevant", result.test_counts.positive}, {"irrelevant", result.test_counts.negative}}},
        {"smo", {{"iterations", result.iterations}, {"support_vectors", result.support_vectors}, {"bias", trained.model.bias}}},
        {"model", MetricsJson(result.model)},
        {"baseline", MetricsJson(result.baseline)},
        {"randomization_p_value", result.p_value},
        {"config", DumpConfig(cfg)},
    };
    std::ofstream out(dir / "metrics.json");
    out << report.dump(2) << '\n';
    if (!out) throw DataError("error writing " + (dir / "metrics.json").string());
  }
  return result;
}

}  // namespace cqarank
