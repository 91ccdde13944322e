// Command-line front end: featurize, gram, train, rerank, evaluate, sigtest,
// plus run (all of it) and config.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cqarank/config.h"
#include "cqarank/error.h"
#include "cqarank/numfmt.h"
#include "cqarank/pipeline.h"
#include "json.hpp"

namespace {

using namespace cqarank;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Options {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;
  bool verbose = false;
};

RunConfig ResolveConfig(const Options& opt) {
  RunConfig cfg;
  if (!opt.config_path.empty()) LoadConfigFile(cfg, opt.config_path);
  for (const auto& [k, v] : opt.overrides) ApplySetting(cfg, k, v);
  for (const auto& kv : opt.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    ApplySetting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.Validate();
  return cfg;
}

ExampleSet Featurize(const std::string& corpus, const RunConfig& cfg, const Resources& res,
                     std::vector<CorpusRecord>* records = nullptr) {
  auto recs = LoadCorpus(corpus, cfg.task);
  ExampleSet set = BuildExamples(recs, cfg, res);
  if (records) *records = std::move(recs);
  return set;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

void PrintMetrics(const Metrics& m, const std::string& label) {
  std::printf("%-9s MAP %6.2f  AvgRec %6.2f  MRR %6.2f  (%zu queries)\n", label.c_str(), m.map, m.avg_rec, m.mrr,
              m.evaluated_groups);
}

int CmdFeaturize(const Options& opt, const std::string& input, const std::string& output) {
  const RunConfig cfg = ResolveConfig(opt);
  const ExampleSet set = Featurize(input, cfg, Resources::Load(cfg));
  auto out = OpenOut(output);
  out << nlohmann::json{{"sim_names", set.layout.sim_names}, {"vec_names", set.layout.vec_names}}.dump() << '\n';
  for (const auto& e : set.examples) {
    nlohmann::json j = {{"query_id", e.query_id}, {"candidate_id", e.candidate_id}, {"rank", e.original_rank},
                        {"label", e.label}};
    if (e.rank) j["rank_feature"] = *e.rank;
    if (e.sim) j["sim"] = *e.sim;
    if (e.vec) j["vec"] = *e.vec;
    if (e.tree_o) j["tree_o"] = e.tree_o->canonical();
    if (e.tree_s) j["tree_s"] = e.tree_s->canonical();
    out << j.dump() << '\n';
  }
  if (!out) throw DataError("error writing " + output);
  std::fprintf(stderr, "featurize: %zu examples -> %s\n", set.examples.size(), output.c_str());
  return kOk;
}

int CmdGram(const Options& opt, const std::string& input, const std::string& output) {
  const RunConfig cfg = ResolveConfig(opt);
  const ExampleSet set = Featurize(input, cfg, Resources::Load(cfg));
  const Matrix g = GramMatrix(set.examples, cfg.kernel, cfg.threads);
  WriteGramFile(output, g, cfg.kernel);
  std::fprintf(stderr, "gram: %zu x %zu -> %s\n", g.rows(), g.cols(), output.c_str());
  return kOk;
}

int CmdTrain(const Options& opt, const std::string& input, const std::string& gram_path, const std::string& model_path) {
  const RunConfig cfg = ResolveConfig(opt);
  std::vector<CorpusRecord> records;
  const ExampleSet set = Featurize(input, cfg, Resources::Load(cfg), &records);
  const Matrix g = gram_path.empty() ? GramMatrix(set.examples, cfg.kernel, cfg.threads)
                                     : ReadGramFile(gram_path, cfg.kernel);
  if (g.rows() != set.examples.size())
    throw DataError("gram file has " + std::to_string(g.rows()) + " rows, corpus has " +
                    std::to_string(set.examples.size()) + " examples");
  const ClassCounts cc = CountClasses(records, cfg.task);
  const TrainResult r = TrainModel(set.examples, g, cfg);
  SaveModel(r.model, model_path);
  std::fprintf(stderr, "train: %zu relevant / %zu irrelevant, %zu iterations, %zu support vectors -> %s\n",
               cc.positive, cc.negative, r.iterations, r.model.support_indices.size(), model_path.c_str());
  return kOk;
}

int CmdRerank(const Options& opt, const std::string& train_path, const std::string& test_path,
              const std::string& model_path, const std::string& output, bool strict) {
  const RunConfig cfg = ResolveConfig(opt);
  const TrainedModel model = LoadModel(model_path);
  CheckModelFingerprint(model, cfg.kernel, strict, std::cerr);
  const Resources res = Resources::Load(cfg);
  const ExampleSet train = Featurize(train_path, cfg, res);
  std::vector<CorpusRecord> test_records;
  const ExampleSet test = Featurize(test_path, cfg, res, &test_records);
  const auto scores = ScoreExamples(model, train.examples, test.examples, cfg);
  const auto groups = ScoredGroups(test_records, scores, cfg.task);
  WritePredictions(output, groups);
  PrintMetrics(Evaluate(groups, cfg.EffectiveK()), "model");
  return kOk;
}

int CmdEvaluate(const Options& opt, const std::string& predictions, bool json) {
  const RunConfig cfg = ResolveConfig(opt);
  const auto groups = GroupPredictions(ReadPredictionRows(predictions));
  for (const auto& g : groups) g.Validate();
  const Metrics m = Evaluate(groups, cfg.EffectiveK());
  if (json) {
    std::cout << nlohmann::json{{"MAP", m.map}, {"AvgRec", m.avg_rec}, {"MRR", m.mrr},
                                {"evaluated_queries", m.evaluated_groups}}.dump() << '\n';
  } else {
    PrintMetrics(m, "scores");
  }
  return kOk;
}

int CmdSigtest(const Options& opt, const std::string& a_path, const std::string& b_path) {
  const RunConfig cfg = ResolveConfig(opt);
  const auto a = GroupPredictions(ReadPredictionRows(a_path));
  const auto b = GroupPredictions(ReadPredictionRows(b_path));
  std::vector<double> ap_a, ap_b;
  PairedAp(a, b, cfg.EffectiveK(), ap_a, ap_b);
  const double p = RandomizationTest(ap_a, ap_b, cfg.sig_resamples, cfg.seed);
  PrintMetrics(Evaluate(a, cfg.EffectiveK()), "a");
  PrintMetrics(Evaluate(b, cfg.EffectiveK()), "b");
  std::printf("p-value %s (%zu paired queries, %d resamples)\n", FormatDouble(p).c_str(), ap_a.size(),
              cfg.sig_resamples);
  return kOk;
}

int CmdRun(const Options& opt, const std::string& train, const std::string& test, const std::string& out_dir) {
  const RunConfig cfg = ResolveConfig(opt);
  const ExperimentResult r = RunExperiment(train, test, cfg, out_dir);
  std::printf("train: %zu relevant / %zu irrelevant; test: %zu relevant / %zu irrelevant\n", r.train_counts.positive,
              r.train_counts.negative, r.test_counts.positive, r.test_counts.negative);
  PrintMetrics(r.model, "model");
  PrintMetrics(r.baseline, "baseline");
  std::printf("randomization test p = %s\n", FormatDouble(r.p_value).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kernel-based question re-ranking for community QA"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config_path, "key = value settings file")->check(CLI::ExistingFile);
  app.add_option("--set", opt.sets, "override a setting, key=value (repeatable)");
  auto* settings = app.add_option_group("Settings", "one flag per configuration key");
  for (const auto& k : SettingKeys()) {
    settings->add_option_function<std::string>(
        "--" + k.key, [&opt, key = k.key](const std::string& v) { opt.overrides[key] = v; }, k.help);
  }

  std::string input, output, gram, model, train, test, a, b, out_dir;
  bool strict = false, json = false;

  auto* featurize = app.add_subcommand("featurize", "write per-example feature blocks as JSON lines");
  featurize->add_option("corpus", input, "JSONL corpus")->required();
  featurize->add_option("-o,--output", output, "output file")->required();

  auto* gram_cmd = app.add_subcommand("gram", "compute and cache the training Gram matrix");
  gram_cmd->add_option("corpus", input, "JSONL training corpus")->required();
  gram_cmd->add_option("-o,--output", output, "gram file")->required();

  auto* train_cmd = app.add_subcommand("train", "train the SVM");
  train_cmd->add_option("corpus", input, "JSONL training corpus")->required();
  train_cmd->add_option("--gram", gram, "precomputed gram file");
  train_cmd->add_option("-m,--model", model, "model output")->required();

  auto* rerank = app.add_subcommand("rerank", "score and rerank a test corpus");
  rerank->add_option("--train", train, "training corpus the model was fit on")->required();
  rerank->add_option("--test", test, "corpus to rerank")->required();
  rerank->add_option("-m,--model", model, "model file")->required();
  rerank->add_option("-o,--output", output, "predictions TSV")->required();
  rerank->add_flag("--strict", strict, "fail on a kernel configuration mismatch");

  auto* evaluate = app.add_subcommand("evaluate", "MAP, AvgRec and MRR of a predictions file");
  evaluate->add_option("predictions", input, "predictions TSV")->required();
  evaluate->add_flag("--json", json, "print JSON");

  auto* sigtest = app.add_subcommand("sigtest", "paired randomization test between two predictions files");
  sigtest->add_option("a", a, "predictions TSV")->required();
  sigtest->add_option("b", b, "predictions TSV")->required();

  auto* show = app.add_subcommand("config", "print the effective configuration");

  auto* run = app.add_subcommand("run", "featurize, train, rerank and evaluate in one go");
  run->add_option("--train", train, "training corpus")->required();
  run->add_option("--test", test, "test corpus")->required();
  run->add_option("-o,--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (show->parsed()) {
      std::cout << DumpConfig(ResolveConfig(opt));
      return kOk;
    }
    if (featurize->parsed()) return CmdFeaturize(opt, input, output);
    if (gram_cmd->parsed()) return CmdGram(opt, input, output);
    if (train_cmd->parsed()) return CmdTrain(opt, input, gram, model);
    if (rerank->parsed()) return CmdRerank(opt, train, test, model, output, strict);
    if (evaluate->parsed()) return CmdEvaluate(opt, input, json);
    if (sigtest->parsed()) return CmdSigtest(opt, a, b);
    if (run->parsed()) return CmdRun(opt, train, test, out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "cqarank: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericalError& e) {
    std::cerr << "cqarank: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DataError& e) {
    std::cerr << "cqarank: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "cqarank: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}
