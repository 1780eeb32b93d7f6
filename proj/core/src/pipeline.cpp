#include "placenames/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "placenames/csv.hpp"
#include "placenames/errors.hpp"
#include "placenames/features.hpp"
#include "placenames/parallel.hpp"
#include "placenames/rng.hpp"

namespace placenames {

FoldPlan make_folds(std::span<const std::uint8_t> labels, int k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("make_folds: k must be >= 2");
    FoldPlan plan;
    plan.k = k;
    plan.rng_seed = seed;
    plan.assignments.assign(labels.size(), -1);
    Rng rng(seed);
    for (const std::uint8_t cls : {std::uint8_t{1}, std::uint8_t{0}}) {
        std::vector<std::uint32_t> rows;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == cls) rows.push_back(static_cast<std::uint32_t>(i));
        }
        if (rows.size() < static_cast<std::size_t>(k)) {
            throw ConfigError("make_folds: class " + std::to_string(cls) + " has " +
                              std::to_string(rows.size()) + " rows, fewer than k=" +
                              std::to_string(k));
        }
        rng.shuffle(std::span<std::uint32_t>(rows));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            plan.assignments[rows[i]] = static_cast<std::int32_t>(i % k);
        }
    }
    return plan;
}

PairMetrics metrics_from_confusion(Country pair, const Confusion& c) {
    PairMetrics m;
    m.pair = pair;
    m.confusion = c;
    const double total = static_cast<double>(c.tp + c.fn + c.tn + c.fp);
    m.accuracy = total > 0 ? static_cast<double>(c.tp + c.tn) / total : 0.0;
    m.sensitivity = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
    m.specificity = (c.tn + c.fp) > 0 ? static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp) : 0.0;
    return m;
}

namespace {

struct FoldOutcome {
    std::vector<std::pair<std::uint32_t, double>> scores;  // (dataset row, oof score)
    ForestModel model;
    FoldStats stats;
};

FoldOutcome run_fold(const LabeledDataset& ds, const FoldPlan& plan, Country pair, int fold,
                     const PipelineConfig& cfg) {
    FoldOutcome out;
    out.stats.fold = fold;
    const std::string code(to_code(pair));

    // materialize training rows
    FeatureMatrix train_x(ds.x.cols);
    std::vector<std::uint8_t> train_y;
    std::vector<std::uint32_t> test_rows;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        if (plan.assignments[i] == fold) {
            test_rows.push_back(static_cast<std::uint32_t>(i));
        } else {
            train_x.push_row(ds.x.row(i));
            train_y.push_back(ds.y[i]);
        }
    }
    out.stats.train_real = train_y.size();
    out.stats.test_rows = test_rows.size();

    ResampleConfig rcfg = cfg.resample;
    rcfg.rng_seed = derive_seed(cfg.seed, "resample/" + code, static_cast<std::uint64_t>(fold));
    ResampledSet rs;
    try {
        rs = smote(train_x, train_y, rcfg);
    } catch (const ResampleError& e) {
        cfg.warn("pair " + code + " fold " + std::to_string(fold) + ": SMOTE skipped (" +
                 e.what() + ")");
        out.stats.fallback = "smote_skipped";
        rs.x = train_x;
        rs.y = train_y;
        rs.origin.assign(train_y.size(), RowOrigin::real);
    }
    for (const RowOrigin origin : rs.origin) {
        out.stats.train_synthetic += origin == RowOrigin::synthetic;
    }
    try {
        ResampledSet cleaned = enn_clean(rs, rcfg);
        out.stats.enn_removed = cleaned.removed.size();
        rs = std::move(cleaned);
    } catch (const ResampleError& e) {
        cfg.warn("pair " + code + " fold " + std::to_string(fold) + ": ENN skipped (" +
                 e.what() + ")");
        out.stats.fallback = out.stats.fallback.empty() ? "enn_skipped"
                                                        : out.stats.fallback + "+enn_skipped";
    }

    ForestConfig fcfg = cfg.forest;
    fcfg.rng_seed = derive_seed(cfg.seed, "forest/" + code, static_cast<std::uint64_t>(fold));
    out.model = fit_forest(rs.x, rs.y, fcfg, std::string(kSchemaVersion));

    out.scores.reserve(test_rows.size());
    for (const std::uint32_t row : test_rows) {
        out.scores.emplace_back(row, out.model.predict_proba(ds.x.row(row)));
    }
    return out;
}

}  // namespace

PairResult run_pair(const CleanCorpus& corpus, Country pair, const PipelineConfig& cfg) {
    LabeledDataset ds = extract_batch(corpus, pair);
    const FoldPlan plan =
        make_folds(ds.y, cfg.k_folds, derive_seed(cfg.seed, "folds/" + std::string(to_code(pair))));

    PairResult result;
    result.pair = pair;
    result.labels = ds.y;
    result.name_ref = ds.name_ref;
    result.oof_scores.assign(ds.rows(), std::numeric_limits<double>::quiet_NaN());
    result.fold_models.resize(cfg.k_folds);
    result.fold_stats.resize(cfg.k_folds);

    std::vector<FoldOutcome> outcomes(cfg.k_folds);
    parallel_for(static_cast<std::size_t>(cfg.k_folds), cfg.jobs,
                 [&](std::size_t f) { outcomes[f] = run_fold(ds, plan, pair, static_cast<int>(f), cfg); });

    for (int f = 0; f < cfg.k_folds; ++f) {
        for (const auto& [row, score] : outcomes[f].scores) {
            if (!std::isnan(result.oof_scores[row])) {
                throw ContractError("run_pair: row scored twice");
            }
            result.oof_scores[row] = score;
        }
        result.fold_models[f] = std::move(outcomes[f].model);
        result.fold_stats[f] = std::move(outcomes[f].stats);
    }

    Confusion confusion;
    for (std::size_t i = 0; i < ds.rows(); ++i) {
        const double score = result.oof_scores[i];
        if (std::isnan(score)) throw ContractError("run_pair: row left unscored");
        const bool predicted_eng = score >= cfg.cutpoint;
        if (ds.y[i] == 1) {
            (predicted_eng ? confusion.tp : confusion.fn)++;
        } else {
            (predicted_eng ? confusion.fp : confusion.tn)++;
        }
    }
    result.metrics = metrics_from_confusion(pair, confusion);
    return result;
}

RunResult run_all(const CleanCorpus& corpus, const PipelineConfig& cfg,
                  std::span<const Country> pairs, const ModelSink& sink) {
    if (!corpus.has_country(Country::ENG)) throw ConfigError("run_all: corpus has no ENG names");
    for (const Country pair : pairs) {
        if (!corpus.has_country(pair)) {
            throw ConfigError(std::string("run_all: corpus has no ") + std::string(to_code(pair)) +
                              " names");
        }
    }

    RunResult run;
    // ENG rows first (corpus order), then the other corpora in pair order
    std::unordered_map<std::int32_t, std::size_t> row_of_name;
    for (std::size_t i = 0; i < corpus.names.size(); ++i) {
        if (corpus.names[i].country != Country::ENG) continue;
        ScoreRow row;
        row.name = corpus.names[i].normalized;
        row.country = Country::ENG;
        row_of_name.emplace(static_cast<std::int32_t>(i), run.table.rows.size());
        run.table.rows.push_back(std::move(row));
    }
    const std::size_t n_eng = run.table.rows.size();
    const bool full_ensemble = pairs.size() == kPairCountries.size();

    for (const Country pair : pairs) {
        const auto started = std::chrono::steady_clock::now();
        PairResult pr = run_pair(corpus, pair, cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        run.timings.emplace_back(pair, elapsed);
        run.metrics.push_back(pr.metrics);
        const int pidx = pair_index(pair);
        for (std::size_t i = 0; i < pr.oof_scores.size(); ++i) {
            if (pr.labels[i] == 1) {
                run.table.rows[row_of_name.at(pr.name_ref[i])].scores[pidx] = pr.oof_scores[i];
            } else {
                ScoreRow row;
                row.name = corpus.names[pr.name_ref[i]].normalized;
                row.country = pair;
                row.scores[pidx] = pr.oof_scores[i];
                run.table.rows.push_back(std::move(row));
            }
        }
        if (sink) sink(pair, pr.fold_models);
        cfg.warn("pair " + std::string(to_code(pair)) + " done in " +
                 csv::format_fixed(elapsed, 1) + "s (accuracy " +
                 csv::format_fixed(pr.metrics.accuracy, 4) + ")");
    }

    if (full_ensemble) {
        for (std::size_t i = 0; i < n_eng; ++i) {
            ScoreRow& row = run.table.rows[i];
            double sum = 0.0;
            for (int p = 0; p < 10; ++p) sum += row.scores[p];
            row.ensemble = sum / 10.0;
        }
    }
    return run;
}

ScoreTable score_external(const std::function<std::vector<ForestModel>(Country)>& load_models,
                          std::span<const PlaceName> names, std::span<const Country> pairs) {
    ScoreTable table;
    table.rows.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        table.rows[i].name = names[i].normalized;
        table.rows[i].country = Country::EXT;
    }
    if (names.empty()) return table;
    const FeatureMatrix x = extract_matrix(names);
    for (const Country pair : pairs) {
        const std::vector<ForestModel> models = load_models(pair);
        if (models.empty()) {
            throw ConfigError(std::string("score_external: no models for ") +
                              std::string(to_code(pair)));
        }
        for (const ForestModel& m : models) {
            if (m.schema_version != kSchemaVersion) {
                throw ContractError("score_external: model schema '" + m.schema_version +
                                    "' does not match feature schema '" +
                                    std::string(kSchemaVersion) + "'");
            }
        }
        const int pidx = pair_index(pair);
        for (std::size_t i = 0; i < names.size(); ++i) {
            double sum = 0.0;
            for (const ForestModel& m : models) sum += m.predict_proba(x.row(i));
            table.rows[i].scores[pidx] = sum / static_cast<double>(models.size());
        }
    }
    if (pairs.size() == kPairCountries.size()) {
        for (ScoreRow& row : table.rows) {
            double sum = 0.0;
            for (int p = 0; p < 10; ++p) sum += row.scores[p];
            row.ensemble = sum / 10.0;
        }
    }
    return table;
}

CleanCorpus stratified_subsample(const CleanCorpus& corpus, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("subsample fraction must be in (0,1]");
    }
    if (fraction == 1.0) return corpus;
    CleanCorpus out;
    for (std::size_t ci = 0; ci < kCountryCount; ++ci) {
        const auto country = static_cast<Country>(ci);
        std::vector<std::uint32_t> rows;
        for (std::size_t i = 0; i < corpus.names.size(); ++i) {
            if (corpus.names[i].country == country) rows.push_back(static_cast<std::uint32_t>(i));
        }
        if (rows.empty()) continue;
        const auto keep = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::llround(fraction * static_cast<double>(rows.size()))));
        Rng rng(derive_seed(seed, "subsample/" + std::string(to_code(country))));
        rng.shuffle(std::span<std::uint32_t>(rows));
        rows.resize(std::min(keep, rows.size()));
        std::sort(rows.begin(), rows.end());  // preserve corpus order
        for (const std::uint32_t r : rows) {
            out.names.push_back(corpus.names[r]);
            out.counts[ci]++;
        }
    }
    return out;
}

void write_metrics_csv(std::span<const PairMetrics> metrics, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "pair,accuracy,sensitivity,specificity,tp,fn,tn,fp\n";
    for (const PairMetrics& m : metrics) {
        out << to_code(m.pair) << ',' << csv::format_double(m.accuracy) << ','
            << csv::format_double(m.sensitivity) << ',' << csv::format_double(m.specificity) << ','
            << m.confusion.tp << ',' << m.confusion.fn << ',' << m.confusion.tn << ','
            << m.confusion.fp << '\n';
    }
}

}  // namespace placenames
