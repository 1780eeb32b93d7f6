// placenames: clean multi-country place-name corpora, train the ten
// England-Other classifiers, and emit score tables, metrics and reports.
//
// Subcommands: clean, run, report, score. Progress goes to stderr, data to
// files. Exit codes: 0 ok, 1 contract/data error, 2 configuration/IO error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "placenames/corpus.hpp"
#include "placenames/csv.hpp"
#include "placenames/errors.hpp"
#include "placenames/features.hpp"
#include "placenames/pipeline.hpp"
#include "placenames/report.hpp"
#include "placenames/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace placenames;

namespace {

std::uint64_t fnv1a_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
        if (!in) break;
    }
    return h;
}

std::vector<Country> parse_pairs(const std::vector<std::string>& codes) {
    if (codes.empty()) {
        return {kPairCountries.begin(), kPairCountries.end()};
    }
    std::vector<Country> pairs;
    for (const std::string& code : codes) {
        const auto c = country_from_code(code);
        if (!c || *c == Country::ENG || *c == Country::EXT) {
            throw ConfigError("unknown pair country code: '" + code + "'");
        }
        if (std::find(pairs.begin(), pairs.end(), *c) == pairs.end()) pairs.push_back(*c);
    }
    return pairs;
}

void print_counts_table(const CleanCorpus& corpus, std::ostream& out) {
    out << "Place name sample sizes\n";
    out << "  Country        Sample size\n";
    static constexpr std::array<Country, 11> order = {
        Country::ENG, Country::DEN, Country::NOR, Country::SWE, Country::IRE, Country::SCO,
        Country::WAL, Country::ROM, Country::GER, Country::FRA, Country::NET,
    };
    for (const Country c : order) {
        if (corpus.count(c) == 0 && c != Country::ENG) continue;
        char line[64];
        std::snprintf(line, sizeof(line), "  %-14s %11lld\n", std::string(display_name(c)).c_str(),
                      static_cast<long long>(corpus.count(c)));
        out << line;
    }
}

struct RunSettings {
    std::uint64_t seed = 42;
    int k_folds = 10;
    double cutpoint = 0.5;
    int jobs = 0;  // 0 = hardware concurrency
    double subsample = 1.0;
    bool save_models = true;
    std::vector<std::string> pair_codes;
    ResampleConfig resample;
    ForestConfig forest;
};

void apply_config_file(RunSettings& s, const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path.string() + ": " + e.what());
    }
    s.seed = doc.value("seed", s.seed);
    s.k_folds = doc.value("k_folds", s.k_folds);
    s.cutpoint = doc.value("cutpoint", s.cutpoint);
    s.jobs = doc.value("jobs", s.jobs);
    s.subsample = doc.value("subsample", s.subsample);
    s.save_models = doc.value("save_models", s.save_models);
    if (doc.contains("pairs")) {
        s.pair_codes = doc["pairs"].get<std::vector<std::string>>();
    }
    if (doc.contains("resample")) {
        const auto& r = doc["resample"];
        s.resample.smote_k = r.value("smote_k", s.resample.smote_k);
        s.resample.enn_k = r.value("enn_k", s.resample.enn_k);
    }
    if (doc.contains("forest")) {
        const auto& f = doc["forest"];
        s.forest.n_trees = f.value("n_trees", s.forest.n_trees);
        if (f.contains("max_depth") && !f["max_depth"].is_null()) {
            s.forest.max_depth = f["max_depth"].get<int>();
        }
        s.forest.min_samples_split = f.value("min_samples_split", s.forest.min_samples_split);
        if (f.contains("features_per_split")) {
            const std::string rule = f["features_per_split"].get<std::string>();
            if (rule == "sqrt") s.forest.features_per_split = ForestConfig::FeatureRule::sqrt_total;
            else if (rule == "all") s.forest.features_per_split = ForestConfig::FeatureRule::all;
            else throw ConfigError("config: features_per_split must be 'sqrt' or 'all'");
        }
        s.forest.bootstrap = f.value("bootstrap", s.forest.bootstrap);
    }
}

json settings_to_json(const RunSettings& s, const std::vector<Country>& pairs) {
    json j;
    j["seed"] = s.seed;
    j["k_folds"] = s.k_folds;
    j["cutpoint"] = s.cutpoint;
    j["jobs"] = s.jobs;
    j["subsample"] = s.subsample;
    j["save_models"] = s.save_models;
    j["pairs"] = json::array();
    for (const Country c : pairs) j["pairs"].push_back(std::string(to_code(c)));
    j["resample"] = {{"smote_k", s.resample.smote_k}, {"enn_k", s.resample.enn_k}};
    j["forest"] = {
        {"n_trees", s.forest.n_trees},
        {"max_depth", s.forest.max_depth ? json(*s.forest.max_depth) : json(nullptr)},
        {"min_samples_split", s.forest.min_samples_split},
        {"features_per_split",
         s.forest.features_per_split == ForestConfig::FeatureRule::all ? "all" : "sqrt"},
        {"bootstrap", s.forest.bootstrap},
    };
    return j;
}

int cmd_clean(const fs::path& manifest_path, const fs::path& out_dir,
              const std::optional<fs::path>& features_out) {
    const auto manifest = load_manifest(manifest_path);
    std::cerr << "loading " << manifest.size() << " country files...\n";
    const CleanCorpus corpus = build_corpus_from_manifest(manifest);
    fs::create_directories(out_dir);
    write_corpus(corpus, out_dir / "corpus.tsv");
    write_drop_log(corpus, out_dir / "drop_log.csv");
    {
        std::ofstream counts(out_dir / "counts.csv");
        counts << "country,kept,dropped\n";
        std::array<std::int64_t, kCountryCount> dropped{};
        for (const DropRecord& d : corpus.drop_log) {
            dropped[static_cast<std::size_t>(d.entry.country)]++;
        }
        for (std::size_t i = 0; i < kCountryCount; ++i) {
            if (corpus.counts[i] == 0 && dropped[i] == 0) continue;
            counts << to_code(static_cast<Country>(i)) << ',' << corpus.counts[i] << ','
                   << dropped[i] << '\n';
        }
    }
    if (features_out) {
        write_feature_csv(corpus, *features_out);
        std::cerr << "feature matrix -> " << *features_out << "\n";
    }
    print_counts_table(corpus, std::cerr);
    std::cerr << "corpus -> " << (out_dir / "corpus.tsv") << " (" << corpus.names.size()
              << " names, " << corpus.drop_log.size() << " drops)\n";
    return 0;
}

int cmd_run(const fs::path& corpus_path, const fs::path& out_dir, const RunSettings& settings) {
    CleanCorpus corpus = read_corpus(corpus_path);
    const std::uint64_t corpus_hash = fnv1a_file(corpus_path);
    if (settings.subsample < 1.0) {
        corpus = stratified_subsample(corpus, settings.subsample, settings.seed);
        std::cerr << "subsampled to fraction " << settings.subsample << ":\n";
        print_counts_table(corpus, std::cerr);
    }
    const std::vector<Country> pairs = parse_pairs(settings.pair_codes);

    PipelineConfig cfg;
    cfg.k_folds = settings.k_folds;
    cfg.cutpoint = settings.cutpoint;
    cfg.seed = settings.seed;
    cfg.jobs = settings.jobs;
    cfg.resample = settings.resample;
    cfg.forest = settings.forest;
    cfg.log = [](const std::string& msg) { std::cerr << msg << "\n"; };

    fs::create_directories(out_dir);
    ModelSink sink;
    if (settings.save_models) {
        fs::create_directories(out_dir / "models");
        sink = [&](Country pair, const std::vector<ForestModel>& models) {
            const fs::path p = out_dir / "models" / (std::string(to_code(pair)) + ".pnf");
            save_forests(models, p);
        };
    }

    const auto started = std::chrono::steady_clock::now();
    const RunResult result = run_all(corpus, cfg, pairs, sink);
    const double total =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

    write_score_table(result.table, out_dir / "score_table.csv");
    write_metrics_csv(result.metrics, out_dir / "pair_metrics.csv");

    json manifest;
    manifest["tool"] = "placenames 1.0.0";
    manifest["command"] = "run";
    manifest["config"] = settings_to_json(settings, pairs);
    char hash_hex[24];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(corpus_hash));
    manifest["corpus"] = {
        {"path", corpus_path.string()},
        {"fnv1a64", hash_hex},
        {"names", corpus.names.size()},
    };
    json counts;
    for (std::size_t i = 0; i < kCountryCount; ++i) {
        if (corpus.counts[i] > 0) {
            counts[std::string(to_code(static_cast<Country>(i)))] = corpus.counts[i];
        }
    }
    manifest["corpus"]["counts"] = counts;
    json timings;
    for (const auto& [pair, secs] : result.timings) timings[std::string(to_code(pair))] = secs;
    timings["total"] = total;
    manifest["timings_sec"] = timings;
    manifest["outputs"] = {
        {"score_table", "score_table.csv"},
        {"pair_metrics", "pair_metrics.csv"},
        {"models", settings.save_models ? json("models/") : json(nullptr)},
    };
    std::ofstream mf(out_dir / "run_manifest.json");
    mf << manifest.dump(2) << '\n';

    std::cerr << "run complete in " << csv::format_fixed(total, 1) << "s; outputs in " << out_dir
              << "\n";
    for (const PairMetrics& m : result.metrics) {
        std::cerr << "  ENG-" << to_code(m.pair) << "  acc " << csv::format_fixed(m.accuracy, 3)
                  << "  sens " << csv::format_fixed(m.sensitivity, 3) << "  spec "
                  << csv::format_fixed(m.specificity, 3) << "\n";
    }
    return 0;
}

std::function<std::vector<ForestModel>(Country)> model_loader(const fs::path& models_dir) {
    return [models_dir](Country pair) {
        const fs::path p = models_dir / (std::string(to_code(pair)) + ".pnf");
        if (!fs::exists(p)) throw ConfigError("model file not found: " + p.string());
        return load_forests(p);
    };
}

int cmd_report(const std::string& which, const fs::path& scores_path, const fs::path& out_dir,
               const std::string& name, int top_n, int bottom_n, const fs::path& models_dir,
               const fs::path& derivation_path, const fs::path& oe_names_path,
               const fs::path& on_names_path, const fs::path& corpus_path) {
    fs::create_directories(out_dir);
    const auto need_scores = [&] {
        if (scores_path.empty()) throw ConfigError("report --which " + which + " needs --scores");
        return read_score_table(scores_path);
    };
    if (which == "rankings") {
        const ScoreTable table = need_scores();
        write_ranking_csv(table, out_dir / "rankings.csv");
        write_ranking_md(rank_names(table, top_n, bottom_n), out_dir / "rankings.md");
        std::cerr << "rankings -> " << out_dir << "\n";
        return 0;
    }
    if (which == "similarity") {
        const ScoreTable table = need_scores();
        const SimilarityReport report = similarity_order(table);
        write_similarity_csv(report, out_dir / "similarity.csv");
        write_similarity_md(report, out_dir / "similarity.md");
        std::cerr << "similarity -> " << out_dir << "\n";
        return 0;
    }
    if (which == "correlations") {
        const ScoreTable table = need_scores();
        const CorrelationMatrix matrix = correlation_matrix(table);
        write_correlation_csv(matrix, out_dir / "correlations.csv");
        write_correlation_md(matrix, out_dir / "correlations.md");
        std::cerr << "correlations -> " << out_dir << "\n";
        return 0;
    }
    if (which == "breakdown") {
        if (name.empty()) throw ConfigError("report --which breakdown needs --name");
        const ScoreTable table = need_scores();
        const NormalizeResult norm = normalize(name);
        if (!norm.accepted) throw DataError("cannot normalize name '" + name + "'");
        const ScoreRow& row = name_breakdown(table, norm.normalized);
        write_breakdown_md(row, out_dir / ("breakdown_" + norm.normalized + ".md"));
        std::cerr << "breakdown for '" << norm.normalized << "' -> " << out_dir << "\n";
        return 0;
    }
    if (which == "oe-on") {
        if (models_dir.empty()) throw ConfigError("report --which oe-on needs --models");
        std::vector<PlaceName> oe_names;
        std::vector<PlaceName> on_names;
        if (!derivation_path.empty()) {
            const auto entries = load_derivation_csv(derivation_path);
            oe_names = filter_derivation(entries, oe_derivation_recipe());
            on_names = filter_derivation(entries, on_derivation_recipe());
        } else if (!oe_names_path.empty() && !on_names_path.empty()) {
            oe_names = load_external_names(oe_names_path);
            on_names = load_external_names(on_names_path);
        } else {
            throw ConfigError("report --which oe-on needs --derivation or --oe-names/--on-names");
        }
        if (oe_names.empty() || on_names.empty()) {
            throw DataError("oe-on: a sample came out empty (OE " +
                            std::to_string(oe_names.size()) + ", ON " +
                            std::to_string(on_names.size()) + ")");
        }
        std::cerr << "OE sample " << oe_names.size() << " names, ON sample " << on_names.size()
                  << " names\n";
        const auto loader = model_loader(models_dir);
        const ScoreTable oe_scores = score_external(loader, oe_names);
        const ScoreTable on_scores = score_external(loader, on_names);
        write_score_table(oe_scores, out_dir / "oe_scores.csv");
        write_score_table(on_scores, out_dir / "on_scores.csv");
        const OeOnReport report = oe_on_validation(oe_scores, on_scores);
        write_oe_on_csv(report, out_dir / "oe_on.csv");
        write_oe_on_md(report, out_dir / "oe_on.md");
        std::cerr << "oe-on -> " << out_dir << "\n";
        return 0;
    }
    if (which == "letters") {
        if (corpus_path.empty()) throw ConfigError("report --which letters needs --corpus");
        const CleanCorpus corpus = read_corpus(corpus_path);
        write_letter_frequency_csv(corpus.names, out_dir / "letter_frequencies.csv");
        std::cerr << "letter frequencies -> " << out_dir << "\n";
        return 0;
    }
    throw ConfigError("unknown report kind: '" + which +
                      "' (rankings|similarity|correlations|breakdown|oe-on|letters)");
}

int cmd_score(const fs::path& models_dir, const fs::path& names_path,
              const std::vector<std::string>& pair_codes, const fs::path& out_path) {
    const std::vector<Country> pairs = parse_pairs(pair_codes);
    std::ifstream in(names_path);
    if (!in) throw ConfigError("cannot open file: " + names_path.string());
    std::vector<PlaceName> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const NormalizeResult norm = normalize(line);
        if (!norm.accepted) {
            std::cerr << "skipping '" << line << "': " << to_string(norm.reason) << "\n";
            continue;
        }
        if (norm.normalized != line) {
            std::cerr << "normalized '" << line << "' -> '" << norm.normalized << "'\n";
        }
        names.push_back(PlaceName{line, norm.normalized, Country::EXT});
    }
    const ScoreTable table = score_external(model_loader(models_dir), names, pairs);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::trunc);
        if (!file) throw ConfigError("cannot write: " + out_path.string());
        out = &file;
    }
    const bool all_pairs = pairs.size() == kPairCountries.size();
    *out << "name";
    for (const Country c : pairs) *out << ',' << to_code(c);
    if (all_pairs) *out << ",ensemble";
    *out << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const ScoreRow& row = table.rows[i];
        *out << csv::escape_field(names[i].raw);  // echo the input form
        for (const Country c : pairs) *out << ',' << csv::format_double(row.scores[pair_index(c)]);
        if (all_pairs) *out << ',' << csv::format_double(row.ensemble);
        *out << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"place-name provenance pipeline"};
    app.require_subcommand(1);

    auto* clean = app.add_subcommand("clean", "normalize and deduplicate raw name lists");
    fs::path clean_manifest;
    fs::path clean_out = "out";
    std::optional<fs::path> clean_features;
    clean->add_option("--manifest", clean_manifest, "JSON manifest of country files")->required();
    clean->add_option("--out", clean_out, "output directory");
    clean->add_option("--features", clean_features, "also export the 263-column feature CSV");

    auto* run = app.add_subcommand("run", "train the England-Other classifiers (10-fold OOF)");
    fs::path run_corpus;
    fs::path run_out = "out";
    fs::path run_config;
    RunSettings settings;
    std::vector<std::string> run_pairs;
    bool no_models = false;
    run->add_option("--corpus", run_corpus, "canonical corpus file (from clean)")->required();
    run->add_option("--out", run_out, "output directory");
    run->add_option("--config", run_config, "JSON run configuration");
    auto* seed_opt = run->add_option("--seed", settings.seed, "top-level RNG seed");
    auto* jobs_opt = run->add_option("--jobs", settings.jobs, "fold-level worker threads (0=auto)");
    auto* pairs_opt = run->add_option("--pairs", run_pairs, "pair country codes (default all ten)");
    auto* sub_opt = run->add_option("--subsample", settings.subsample,
                                    "stratified per-country fraction in (0,1]");
    auto* cut_opt = run->add_option("--cutpoint", settings.cutpoint, "classification cut point");
    run->add_flag("--no-models", no_models, "do not persist fold models");

    auto* report = app.add_subcommand("report", "derive paper-style tables from run outputs");
    std::string report_which;
    fs::path report_scores, report_out = "out", report_models, report_derivation;
    fs::path report_oe, report_on, report_corpus;
    std::string report_name;
    int report_top = 20;
    int report_bottom = 20;
    report->add_option("--which", report_which,
                       "rankings|similarity|correlations|breakdown|oe-on|letters")
        ->required();
    report->add_option("--scores", report_scores, "score_table.csv from run");
    report->add_option("--out", report_out, "output directory");
    report->add_option("--name", report_name, "name for breakdown");
    report->add_option("--top", report_top, "top rows in rankings.md");
    report->add_option("--bottom", report_bottom, "bottom rows in rankings.md");
    report->add_option("--models", report_models, "models directory from run (oe-on)");
    report->add_option("--derivation", report_derivation, "derivation CSV (oe-on)");
    report->add_option("--oe-names", report_oe, "pre-filtered OE name list (oe-on)");
    report->add_option("--on-names", report_on, "pre-filtered ON name list (oe-on)");
    report->add_option("--corpus", report_corpus, "canonical corpus file (letters)");

    auto* score = app.add_subcommand("score", "score ad-hoc names with persisted fold models");
    fs::path score_models, score_names, score_out;
    std::vector<std::string> score_pairs;
    score->add_option("--models", score_models, "models directory from run")->required();
    score->add_option("--names", score_names, "file with one name per line")->required();
    score->add_option("--pairs", score_pairs, "pair country codes (default all ten)");
    score->add_option("--out", score_out, "write CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*clean) return cmd_clean(clean_manifest, clean_out, clean_features);
        if (*run) {
            if (!run_config.empty()) apply_config_file(settings, run_config);
            // explicit flags win over the config file
            if (seed_opt->count()) settings.seed = seed_opt->as<std::uint64_t>();
            if (jobs_opt->count()) settings.jobs = jobs_opt->as<int>();
            if (sub_opt->count()) settings.subsample = sub_opt->as<double>();
            if (cut_opt->count()) settings.cutpoint = cut_opt->as<double>();
            if (pairs_opt->count()) settings.pair_codes = run_pairs;
            if (no_models) settings.save_models = false;
            return cmd_run(run_corpus, run_out, settings);
        }
        if (*report) {
            return cmd_report(report_which, report_scores, report_out, report_name, report_top,
                              report_bottom, report_models, report_derivation, report_oe,
                              report_on, report_corpus);
        }
        if (*score) return cmd_score(score_models, score_names, score_pairs, score_out);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ContractError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
