#ifndef CQARANK_PIPELINE_H_
#define CQARANK_PIPELINE_H_

#include <span>
#include <string>
#include <vector>

#include "cqarank/config.h"
#include "cqarank/corpus.h"
#include "cqarank/kernel.h"
#include "cqarank/rankeval.h"
#include "cqarank/svm.h"

namespace cqarank {

// Files a run depends on besides the corpora.
struct Resources {
  StopwordSet stopwords;
  EmbeddingTable embeddings;

  static Resources Load(const RunConfig& cfg);
};

// Feature names of the dense blocks, in storage order.
struct FeatureLayout {
  std::vector<std::string> sim_names;
  std::vector<std::string> vec_names;
};

struct ExampleSet {
  std::vector<Example> examples;
  FeatureLayout layout;
};

// Per record: the 20 similarities (plus the PTK feature when enabled),
// the rank feature, REL-linked macro-trees in both directions when
// trees are present, and the embedding/MTE vec block when enabled.
// Throws DataError naming the record when an enabled block cannot be
// built.
ExampleSet BuildExamples(std::span<const CorpusRecord> records, const RunConfig& cfg, const Resources& res);

// Hash of the ids and labels, stored in models to catch a mismatched
// training corpus at scoring time.
std::string TrainingChecksum(std::span<const Example> train);

TrainResult TrainModel(std::span<const Example> train, const Matrix& gram, const RunConfig& cfg);

// Decision values of `test` under a model trained on `train`.
std::vector<double> ScoreExamples(const TrainedModel& model, std::span<const Example> train,
                                  std::span<const Example> test, const RunConfig& cfg);

// Groups the records by query and attaches scores[i] to record i.
std::vector<QueryGroup> ScoredGroups(std::span<const CorpusRecord> records, std::span<const double> scores,
                                     Task task);

// Scores of the search-engine order itself: 1 / original_rank.
std::vector<double> BaselineScores(std::span<const CorpusRecord> records);

// Paired per-query AP lists over the groups where both have relevant
// candidates, for the significance test.
void PairedAp(std::span<const QueryGroup> a, std::span<const QueryGroup> b, int k, std::vector<double>& ap_a,
              std::vector<double>& ap_b);

struct ExperimentResult {
  Metrics model;
  Metrics baseline;
  // Randomization test, model vs. search-engine order.
  double p_value = 1.0;
  std::vector<QueryGroup> groups;
  ClassCounts train_counts;
  ClassCounts test_counts;
  std::size_t iterations = 0;
  std::size_t support_vectors = 0;
};

// featurize -> gram -> train -> score -> rerank -> evaluate. Writes
// predictions.tsv, baseline.tsv and metrics.json into out_dir (created
// if needed); an empty out_dir writes nothing.
ExperimentResult RunExperiment(const std::string& train_path, const std::string& test_path,
                               const RunConfig& cfg, const std::string& out_dir);

}  // namespace cqarank

#endif  // CQARANK_PIPELINE_H_
