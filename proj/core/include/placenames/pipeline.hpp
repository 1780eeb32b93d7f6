#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "placenames/corpus.hpp"
#include "placenames/dataset.hpp"
#include "placenames/forest.hpp"
#include "placenames/resample.hpp"
#include "placenames/score_table.hpp"

namespace placenames {

struct FoldPlan {
    int k = 10;
    std::vector<std::int32_t> assignments;  // per-row fold index
    std::uint64_t rng_seed = 0;
};

// Stratified, seeded, deterministic: per-fold class counts differ from the
// ideal split by at most one row. A class smaller than k -> ConfigError.
FoldPlan make_folds(std::span<const std::uint8_t> labels, int k, std::uint64_t seed);

struct Confusion {
    std::int64_t tp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
    std::int64_t fp = 0;
};

struct PairMetrics {
    Country pair = Country::EXT;
    Confusion confusion;
    double accuracy = 0.0;     // (tp+tn)/total
    double sensitivity = 0.0;  // tp/(tp+fn), England positive
    double specificity = 0.0;  // tn/(tn+fp)
};

PairMetrics metrics_from_confusion(Country pair, const Confusion& c);

struct FoldStats {
    int fold = 0;
    std::size_t train_real = 0;
    std::size_t train_synthetic = 0;
    std::size_t enn_removed = 0;
    std::size_t test_rows = 0;
    std::string fallback;  // "", "smote_skipped", "enn_skipped"
};

struct PipelineConfig {
    int k_folds = 10;
    double cutpoint = 0.5;
    std::uint64_t seed = 42;
    int jobs = 1;  // fold-level parallelism
    ResampleConfig resample;
    ForestConfig forest;
    std::function<void(const std::string&)> log;  // warnings/progress, may be empty

    void warn(const std::string& msg) const {
        if (log) log(msg);
    }
};

struct PairResult {
    Country pair = Country::EXT;
    std::vector<double> oof_scores;      // aligned to the pair dataset rows
    std::vector<std::uint8_t> labels;
    std::vector<std::int32_t> name_ref;  // into corpus.names
    PairMetrics metrics;
    std::vector<ForestModel> fold_models;  // k models, fold order
    std::vector<FoldStats> fold_stats;
};

// One England-Other classifier under k-fold cross-validation. SMOTE-ENN is
// applied to the training rows of each fold only; every row is scored
// exactly once, by the fold model that held it out. Fold resampling
// failures fall back (SMOTE failure -> raw training set, ENN failure ->
// SMOTE output) with a warning through cfg.log.
PairResult run_pair(const CleanCorpus& corpus, Country pair, const PipelineConfig& cfg);

// Called with each pair's fold models as soon as the pair finishes, so a
// full run does not have to hold every model in memory.
using ModelSink = std::function<void(Country, const std::vector<ForestModel>&)>;

struct RunResult {
    ScoreTable table;
    std::vector<PairMetrics> metrics;                 // pair order as requested
    std::vector<std::pair<Country, double>> timings;  // seconds per pair
};

// Runs the requested England-Other pairs (all ten by default) and assembles
// the score table: ENG rows get one out-of-fold score per pair plus their
// ensemble mean (only when all ten pairs ran); each non-ENG name gets its
// own pair's score. Row order is corpus order, ENG block first.
RunResult run_all(const CleanCorpus& corpus, const PipelineConfig& cfg,
                  std::span<const Country> pairs = kPairCountries, const ModelSink& sink = {});

// Scores names that were in no fold: per pair, the mean of that pair's k
// fold models. `load_models` is called once per requested pair.
ScoreTable score_external(const std::function<std::vector<ForestModel>(Country)>& load_models,
                          std::span<const PlaceName> names,
                          std::span<const Country> pairs = kPairCountries);

// Deterministic per-country subsample (fraction of each country's names,
// rounded half up), preserving corpus order. Used for desk-scale runs.
CleanCorpus stratified_subsample(const CleanCorpus& corpus, double fraction, std::uint64_t seed);

// Metrics CSV: pair,accuracy,sensitivity,specificity,tp,fn,tn,fp
void write_metrics_csv(std::span<const PairMetrics> metrics, const std::filesystem::path& path);

}  // namespace placenames
