// Acceptance suite: one PASS/FAIL/SKIP line per criterion. Exits non-zero
// if anything fails. Criteria needing the converted SemEval data read it
// from $CQARANK_SEMEVAL_DIR ({train,dev,test}.jsonl) and are skipped when
// the variable is unset.
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cqarank/pipeline.h"
#include "cqarank/similarity.h"
#include "oracles.h"
#include "synthetic.h"

namespace {

using namespace cqarank;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

enum class Outcome { kPass, kFail, kSkip };

struct Check {
  Outcome outcome = Outcome::kPass;
  std::string detail;

  void Expect(bool ok, const std::string& what) {
    if (!ok && outcome != Outcome::kFail) {
      outcome = Outcome::kFail;
      detail = what;
    }
  }
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

bool Close(double got, double want, double tol) { return std::abs(got - want) <= tol * std::max(1.0, std::abs(want)); }

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Check StkEquivalence() {
  Check c;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::vector<SyntaxTree> trees;
  for (int i = 0; i < 200; ++i) trees.push_back(oracle::RandomTree(rng));
  int compared = 0;
  for (double lambda : {1.0, 0.4}) {
    for (std::size_t i = 0; i < trees.size(); ++i) {
      for (const SyntaxTree* other : {&trees[i], &trees[(i + 1) % trees.size()]}) {
        const double want = oracle::BruteForceStk(trees[i], *other, lambda);
        const double got = Stk(trees[i], *other, lambda);
        ++compared;
        c.Expect(Close(got, want, 1e-9), "stk " + Num(got) + " vs oracle " + Num(want) + " on " + ToBracketed(trees[i]));
      }
    }
  }
  const SyntaxTree t = ParseBracketed("(S (A a) (B b))");
  c.Expect(Stk(t, t, 1.0) == 6.0, "stk fixture at lambda=1 is " + Num(Stk(t, t, 1.0)));
  const double secs = Seconds(start);
  c.Expect(secs < 10.0, "took " + Num(secs) + " s");
  if (c.outcome == Outcome::kPass) c.detail = std::to_string(compared) + " pairs within 1e-9, fixture = 6, " + Num(secs) + " s";
  return c;
}

Check PtkEquivalence() {
  Check c;
  const auto start = Clock::now();
  std::mt19937_64 rng(2025);
  std::vector<SyntaxTree> trees;
  for (int i = 0; i < 200; ++i) trees.push_back(oracle::RandomTree(rng));
  int compared = 0;
  for (double lambda : {1.0, 0.4}) {
    for (double mu : {1.0, 0.4}) {
      for (std::size_t i = 0; i < trees.size(); ++i) {
        for (const SyntaxTree* other : {&trees[i], &trees[(i + 1) % trees.size()]}) {
          const double want = oracle::BruteForcePtk(trees[i], *other, lambda, mu);
          const double got = Ptk(trees[i], *other, lambda, mu);
          ++compared;
          c.Expect(Close(got, want, 1e-9), "ptk " + Num(got) + " vs oracle " + Num(want));
        }
      }
    }
  }
  c.Expect(Ptk(SyntaxTree("A"), SyntaxTree("A"), 1.0, 1.0) == 1.0, "single-node fixture");
  if (c.outcome == Outcome::kPass)
    c.detail = std::to_string(compared) + " pairs within 1e-9, " + Num(Seconds(start)) + " s";
  return c;
}

Check GramPsd() {
  Check c;
  struct Named {
    const char* name;
    KernelConfig cfg;
  };
  auto only = [](bool sim, bool tk, bool rank) {
    KernelConfig k;
    k.use_sim = sim;
    k.use_tk = tk;
    k.use_rank = rank;
    return k;
  };
  std::vector<Named> configs = {{"sim-RBF", only(true, false, false)},
                                {"STK", only(false, true, false)},
                                {"PTK", only(false, true, false)},
                                {"rank-linear", only(false, false, true)},
                                {"combined", KernelConfig{}}};
  configs[1].cfg.tk_kind = TreeKernelKind::kStk;
  configs[3].cfg.rank_kernel = RankKernel::kLinear;
  configs[4].cfg.use_vec = true;
  std::mt19937_64 rng(77);
  std::vector<Example> ex;
  for (int i = 0; i < 20; ++i) ex.push_back(oracle::RandomExample(rng, std::to_string(i)));
  double worst = 0.0;
  for (const auto& [name, cfg] : configs) {
    const Matrix g = GramMatrix(ex, cfg);
    Eigen::MatrixXd m(g.rows(), g.cols());
    double norm = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j) {
        m(i, j) = g(i, j);
        norm = std::max(norm, std::abs(g(i, j)));
      }
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
    worst = std::min(worst, min_eig / norm);
    c.Expect(g.Asymmetry() <= 1e-12, std::string(name) + ": asymmetry " + Num(g.Asymmetry()));
    c.Expect(min_eig >= -1e-8 * norm, std::string(name) + ": min eigenvalue " + Num(min_eig));
  }
  if (c.outcome == Outcome::kPass) c.detail = "5 configs x 20 examples, worst min-eig/|G| = " + Num(worst);
  return c;
}

// KKT at tolerance tol, equality constraint, monotone trace.
void CheckSmoRun(Check& c, const Matrix& g, const std::vector<int>& y, const std::string& name) {
  TrainConfig cfg;
  cfg.record_objective = true;
  const TrainResult r = TrainSmo(g, y, cfg);
  double balance = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double f = r.model.bias;
    for (std::size_t j = 0; j < y.size(); ++j) f += r.alpha[j] * y[j] * g(i, j);
    const double m = y[i] * f, a = r.alpha[i];
    balance += a * y[i];
    c.Expect(a >= 0.0 && a <= cfg.C, name + ": alpha out of box");
    if (a == 0.0) c.Expect(m >= 1.0 - cfg.tol, name + ": KKT violated at a bound-0 point");
    else if (a == cfg.C) c.Expect(m <= 1.0 + cfg.tol, name + ": KKT violated at a bound-C point");
    else c.Expect(std::abs(m - 1.0) <= cfg.tol, name + ": KKT violated at a free point");
  }
  c.Expect(std::abs(balance) <= 1e-6, name + ": sum alpha*y = " + Num(balance));
  for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
    c.Expect(r.objective_trace[k] >= r.objective_trace[k - 1] - 1e-12 * std::abs(r.objective_trace[k - 1]),
             name + ": objective decreased");
}

Check SmoCorrectness() {
  Check c;
  Matrix g2(2, 2);
  g2(0, 0) = g2(1, 1) = 1.0;
  g2(0, 1) = g2(1, 0) = -1.0;
  std::vector<int> y2 = {-1, 1};
  const TrainResult r = TrainSmo(g2, y2, TrainConfig{});
  c.Expect(std::abs(r.alpha[0] - 0.5) <= 1e-6 && std::abs(r.alpha[1] - 0.5) <= 1e-6,
           "analytic alpha = (" + Num(r.alpha[0]) + ", " + Num(r.alpha[1]) + ")");
  c.Expect(std::abs(r.model.bias) <= 1e-6, "analytic bias = " + Num(r.model.bias));
  const std::vector<double> row = {-0.5, 0.5};
  c.Expect(std::abs(Decision(r.model, row) - 0.5) <= 1e-6, "decision(0.5) != 0.5");

  for (auto [gap, name] : {std::pair{4.0, "separable"}, std::pair{0.5, "non-separable"}}) {
    std::mt19937_64 rng(gap > 1 ? 5 : 6);
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<std::array<double, 2>> x;
    std::vector<int> y;
    for (int i = 0; i < 50; ++i) {
      const int label = i % 2 == 0 ? 1 : -1;
      x.push_back({label * gap + noise(rng), noise(rng)});
      y.push_back(label);
    }
    Matrix g(50, 50);
    for (std::size_t i = 0; i < 50; ++i)
      for (std::size_t j = 0; j < 50; ++j) g(i, j) = x[i][0] * x[j][0] + x[i][1] * x[j][1];
    CheckSmoRun(c, g, y, name);
  }
  if (c.outcome == Outcome::kPass) c.detail = "alpha=(0.5,0.5) b=0; KKT + monotone objective on 50-point sets";
  return c;
}

QueryGroup Group(const std::string& id, const std::vector<bool>& gold_in_score_order) {
  QueryGroup g{id, {}};
  const int n = static_cast<int>(gold_in_score_order.size());
  for (int i = 0; i < n; ++i)
    g.candidates.push_back({id + std::to_string(i), i + 1, gold_in_score_order[static_cast<std::size_t>(i)],
                            static_cast<double>(n - i)});
  return g;
}

Check MetricsFixtures() {
  Check c;
  const double ap = AveragePrecision({true, false, true, false}, 4);
  c.Expect(std::abs(ap - 0.83333) <= 1e-5, "AP = " + Num(ap));
  std::vector<QueryGroup> mrr = {Group("a", {false, true, false})};
  c.Expect(Evaluate(mrr, 10).mrr == 50.0, "MRR = " + Num(Evaluate(mrr, 10).mrr));
  std::vector<QueryGroup> three = {Group("a", {true, false, true, false}), Group("b", {false, false, true}),
                                   Group("c", {false, false})};
  const Metrics m = Evaluate(three, 10);
  // a: AP (1 + 2/3)/2, found 2/2, RR 1; b: AP 1/3, found 1/1, RR 1/3; c: no relevant.
  const double want_map = 100.0 * ((1.0 + 2.0 / 3.0) / 2.0 + 1.0 / 3.0) / 2.0;
  const double want_mrr = 100.0 * (1.0 + 1.0 / 3.0) / 2.0;
  c.Expect(m.map == want_map, "MAP = " + Num(m.map) + ", want " + Num(want_map));
  c.Expect(m.avg_rec == 100.0, "AvgRec = " + Num(m.avg_rec));
  c.Expect(m.mrr == want_mrr, "MRR = " + Num(m.mrr) + ", want " + Num(want_mrr));
  if (c.outcome == Outcome::kPass) c.detail = "AP 0.83333, MRR 50, 3-group MAP/AvgRec/MRR exact";
  return c;
}

Check SimilarityFixtures() {
  Check c;
  c.Expect(std::abs(Jaccard({"a", "b"}, {"b", "c"}) - 1.0 / 3.0) <= 1e-9, "jaccard 1/3 case");
  c.Expect(std::abs(LcsSim({"a", "b", "c", "d", "e"}, {"a", "c", "e"}) - 0.6) <= 1e-9, "lcs 0.6 case");
  c.Expect(std::abs(GstSim({"a", "b", "c", "d"}, {"b", "c", "d", "a"}, 2) - 0.75) <= 1e-9, "gst 0.75 case");
  c.Expect(std::abs(Containment({"a", "b", "c"}, {"b", "c", "d"}) - 2.0 / 3.0) <= 1e-9, "containment 2/3 case");
  c.Expect(std::abs(Cosine({{"a", 1}, {"b", 1}}, {{"a", 1}}) - 1.0 / std::sqrt(2.0)) <= 1e-9, "cosine case");

  // qo -> [get work visa wife qatar], qs -> [wife visa get work visa qatar]
  const std::vector<double> want = {
      10.0 / 11.0, 4.0 / 6.0, 1.0,       1.0,       6.0 / std::sqrt(40.0),
      4.0 / 9.0,   2.0 / 5.0, 2.0 / 7.0, 2.0 / 4.0, 2.0 / std::sqrt(20.0),
      2.0 / 7.0,   1.0 / 4.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / std::sqrt(12.0),
      0.0,         0.0,       0.0,       0.0,       0.0};
  SimilarityConfig cfg;
  cfg.stopwords = {"how", "do", "i", "a", "for", "my", "in", "can"};
  const FeatureVector v = SimilarityVector("How do I get a work visa for my wife in Qatar?",
                                           "Wife visa: can I get work visa in Qatar", cfg);
  c.Expect(v.size() == 20, "vector length " + std::to_string(v.size()));
  for (std::size_t i = 0; i < std::min<std::size_t>(20, v.size()); ++i)
    c.Expect(std::abs(v.values[i] - want[i]) <= 1e-9, v.names[i] + " = " + Num(v.values[i]) + ", want " + Num(want[i]));
  if (c.outcome == Outcome::kPass) c.detail = "20/20 fixture values and 5 measure cases within 1e-9";
  return c;
}

Check PerfectFeature(const fs::path& work) {
  Check c;
  const auto start = Clock::now();
  synthetic::CorpusShape train, test;
  train.prefix = "tr";
  test.prefix = "te";
  test.seed = 2;
  synthetic::WriteCorpus((work / "train.jsonl").string(), train);
  synthetic::WriteCorpus((work / "test.jsonl").string(), test);
  RunConfig cfg;
  cfg.kernel.use_tk = false;
  cfg.kernel.use_rank = false;
  const ExperimentResult r =
      RunExperiment((work / "train.jsonl").string(), (work / "test.jsonl").string(), cfg, (work / "perfect").string());
  const double secs = Seconds(start);
  c.Expect(r.groups.size() == 50, "groups = " + std::to_string(r.groups.size()));
  c.Expect(r.model.map == 100.0, "MAP = " + Num(r.model.map));
  c.Expect(secs < 60.0, "took " + Num(secs) + " s");
  if (c.outcome == Outcome::kPass) c.detail = "50x10 synthetic, MAP = 100, " + Num(secs) + " s";
  return c;
}

Check RankMonotonicity() {
  Check c;
  synthetic::CorpusShape shape;
  shape.perfect = false;
  const auto recs = ParseCorpus(synthetic::CorpusJsonl(shape), Task::kB);
  std::vector<double> scores;
  for (const auto& r : recs) scores.push_back(RankFeature(r.original_rank, RankMode::kInverse));
  std::size_t checked = 0;
  for (const auto& g : ScoredGroups(recs, scores, Task::kB)) {
    const auto order = Rerank(g);
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& cand = *std::find_if(g.candidates.begin(), g.candidates.end(),
                                       [&](const Candidate& x) { return x.candidate_id == order[i]; });
      c.Expect(cand.original_rank == static_cast<int>(i + 1), "group " + g.query_id + " reordered");
    }
    ++checked;
  }
  if (c.outcome == Outcome::kPass) c.detail = std::to_string(checked) + " groups keep their original order";
  return c;
}

const char* DataDir() {
  const char* d = std::getenv("CQARANK_SEMEVAL_DIR");
  return d && *d ? d : nullptr;
}

Check Table2Counts() {
  Check c;
  const char* dir = DataDir();
  if (!dir) return {Outcome::kSkip, "set CQARANK_SEMEVAL_DIR to the converted Task B corpora"};
  struct Split {
    const char* file;
    std::size_t pos, neg;
  };
  for (const Split& s : {Split{"train.jsonl", 1083, 1586}, Split{"dev.jsonl", 214, 286}, Split{"test.jsonl", 233, 467}}) {
    const auto path = fs::path(dir) / s.file;
    if (!fs::exists(path)) return {Outcome::kSkip, std::string("missing ") + path.string()};
    const auto recs = LoadCorpus(path.string(), Task::kB);
    const ClassCounts cc = CountClasses(recs, Task::kB);
    c.Expect(cc.positive == s.pos && cc.negative == s.neg,
             std::string(s.file) + ": " + std::to_string(cc.positive) + "/" + std::to_string(cc.negative));
  }
  if (c.outcome == Outcome::kPass) c.detail = "train 1083/1586, dev 214/286, test 233/467";
  return c;
}

Check Table3Significance(const fs::path& work) {
  Check c;
  const char* dir = DataDir();
  if (!dir) return {Outcome::kSkip, "set CQARANK_SEMEVAL_DIR to the converted Task B corpora with parse trees"};
  const auto train = fs::path(dir) / "train.jsonl", test = fs::path(dir) / "test.jsonl";
  if (!fs::exists(train) || !fs::exists(test)) return {Outcome::kSkip, "missing train.jsonl or test.jsonl"};
  RunConfig cfg;  // Sim + PTK + 1/pos under RBF
  const ExperimentResult r = RunExperiment(train.string(), test.string(), cfg, (work / "semeval").string());
  c.Expect(r.model.map > r.baseline.map, "MAP " + Num(r.model.map) + " <= baseline " + Num(r.baseline.map));
  c.Expect(r.p_value < 0.05, "p = " + Num(r.p_value));
  c.detail = "MAP " + Num(r.model.map) + " vs GR " + Num(r.baseline.map) + ", p = " + Num(r.p_value) +
             (c.outcome == Outcome::kPass ? "" : " (" + c.detail + ")");
  return c;
}

}  // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "cqarank_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const std::vector<std::pair<const char*, std::function<Check()>>> criteria = {
      {"stk-bruteforce-equivalence", StkEquivalence},
      {"ptk-bruteforce-equivalence", PtkEquivalence},
      {"gram-psd", GramPsd},
      {"smo-correctness", SmoCorrectness},
      {"metrics-fixtures", MetricsFixtures},
      {"similarity-fixtures", SimilarityFixtures},
      {"perfect-feature-map-100", [&] { return PerfectFeature(work); }},
      {"inverse-rank-identity", RankMonotonicity},
      {"semeval-model-beats-gr (dataset)", [&] { return Table3Significance(work); }},
      {"semeval-class-counts (dataset)", Table2Counts},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Check c;
    try {
      c = run();
    } catch (const std::exception& e) {
      c = {Outcome::kFail, std::string("exception: ") + e.what()};
    }
    const char* tag = c.outcome == Outcome::kPass ? "PASS" : c.outcome == Outcome::kFail ? "FAIL" : "SKIP";
    if (c.outcome == Outcome::kFail) ++failures;
    std::printf("%s  %s: %s\n", tag, name, c.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work);
  return failures == 0 ? 0 : 1;
}
