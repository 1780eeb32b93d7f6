#include <doctest.h>

#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <sstream>

#include "placenames/errors.hpp"
#include "placenames/report.hpp"
#include "placenames/rng.hpp"
#include "support/synthetic.hpp"

using namespace placenames;
namespace fs = std::filesystem;

namespace {

ScoreRow eng_row(std::string name, std::array<double, 10> scores) {
    ScoreRow row;
    row.name = std::move(name);
    row.country = Country::ENG;
    row.scores = scores;
    double sum = 0.0;
    for (const double s : scores) sum += s;
    row.ensemble = sum / 10.0;
    return row;
}

ScoreRow eng_row_constant(std::string name, double score) {
    std::array<double, 10> scores;
    scores.fill(score);
    return eng_row(std::move(name), scores);
}

fs::path temp_dir() {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() /
                         ("placenames_report_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("report");

TEST_CASE("ranking orders by score with lexicographic ties, ENG rows only") {
    ScoreTable table;
    table.rows.push_back(eng_row_constant("middle", 0.7));
    table.rows.push_back(eng_row_constant("boring", 0.9));
    table.rows.push_back(eng_row_constant("alpha", 0.9));
    table.rows.push_back(eng_row_constant("low", 0.2));
    ScoreRow foreign;
    foreign.name = "intruder";
    foreign.country = Country::ROM;
    foreign.scores[pair_index(Country::ROM)] = 0.99;
    table.rows.push_back(foreign);

    const RankingReport report = rank_names(table, 2, 2);
    CHECK(report.total == 4);
    REQUIRE(report.top.size() == 2);
    CHECK(report.top[0].name == "alpha");  // tie with boring breaks alphabetically
    CHECK(report.top[0].rank == 1);
    CHECK(report.top[1].name == "boring");
    CHECK(report.top[1].rank == 2);
    REQUIRE(report.bottom.size() == 2);
    CHECK(report.bottom[0].name == "middle");
    CHECK(report.bottom[0].rank == 3);
    CHECK(report.bottom[1].name == "low");
    CHECK(report.bottom[1].rank == 4);
}

TEST_CASE("breakdown finds rows and the constant-score ensemble identity holds") {
    ScoreTable table;
    table.rows.push_back(eng_row_constant("steady", 0.41));
    const std::array<double, 10> laira_like = {0.56, 0.13, 0.09, 0.05, 0.38,
                                               0.15, 0.05, 0.10, 0.03, 0.45};
    table.rows.push_back(eng_row("laira", laira_like));

    CHECK(name_breakdown(table, "steady").ensemble == doctest::Approx(0.41).epsilon(1e-15));
    CHECK(name_breakdown(table, "laira").ensemble == doctest::Approx(0.199).epsilon(1e-12));
    CHECK_THROWS_AS(name_breakdown(table, "nowhere"), DataError);
}

TEST_CASE("similarity ordering is ascending with exact constant-column means") {
    ScoreTable table;
    Rng rng(5);
    for (int i = 0; i < 25; ++i) {
        std::array<double, 10> scores;
        for (int p = 0; p < 10; ++p) scores[p] = 0.05 * p + 0.2 * rng.uniform();
        scores[pair_index(Country::WAL)] = 0.9;  // constant classifier
        table.rows.push_back(eng_row("name" + std::to_string(i), scores));
    }
    const SimilarityReport report = similarity_order(table);
    REQUIRE(report.rows.size() == 10);
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        CHECK(report.rows[i - 1].mean <= report.rows[i].mean);
    }
    bool found = false;
    for (const auto& row : report.rows) {
        if (row.pair == Country::WAL) {
            CHECK(row.mean == doctest::Approx(0.9).epsilon(1e-12));
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("count_non_english counts strictly below the cut point") {
    ScoreTable table;
    table.rows.push_back(eng_row_constant("a", 1.0));
    table.rows.push_back(eng_row_constant("b", 0.5));
    table.rows.push_back(eng_row_constant("c", 0.49));
    CHECK(count_non_english(table, 0.5) == 1);
    CHECK(count_non_english(table, 0.0) == 0);
    ScoreTable ones;
    ones.rows.push_back(eng_row_constant("x", 1.0));
    CHECK(count_non_english(ones, 0.5) == 0);
}

TEST_CASE("oe/on validation report separates shifted samples") {
    ScoreTable oe, on;
    Rng rng(13);
    const auto ext_row = [&](double base) {
        ScoreRow row;
        row.country = Country::EXT;
        double sum = 0.0;
        for (int p = 0; p < 10; ++p) {
            row.scores[p] = std::min(1.0, std::max(0.0, base + 0.05 * rng.uniform()));
            sum += row.scores[p];
        }
        row.ensemble = sum / 10.0;
        return row;
    };
    for (int i = 0; i < 60; ++i) {
        oe.rows.push_back(ext_row(0.85));
        oe.rows.back().name = "oe" + std::to_string(i);
    }
    for (int i = 0; i < 25; ++i) {
        on.rows.push_back(ext_row(0.70));
        on.rows.back().name = "on" + std::to_string(i);
    }
    const OeOnReport report = oe_on_validation(oe, on);
    CHECK(report.oe_n == 60);
    CHECK(report.on_n == 25);
    for (const auto& col : report.columns) {
        CHECK(col.oe_mean > col.on_mean);
        CHECK(col.t_test.p_value < 0.001);
        CHECK(col.mw_test.p_value < 0.001);
    }
    // ensemble column pools, the others use Welch
    CHECK(report.columns[4].t_test.method == TestMethod::pooled_t);
    for (int c = 0; c < 4; ++c) CHECK(report.columns[c].t_test.method == TestMethod::welch_t);
}

TEST_CASE("reports regenerated from the persisted table are byte-identical") {
    const CleanCorpus corpus = testsupport::synthetic_corpus(25, 11, 3);
    PipelineConfig cfg;
    cfg.k_folds = 3;
    cfg.forest.n_trees = 8;
    cfg.seed = 5;
    cfg.jobs = 2;
    const RunResult run = run_all(corpus, cfg);

    const fs::path dir = temp_dir();
    write_score_table(run.table, dir / "scores.csv");
    const ScoreTable reloaded = read_score_table(dir / "scores.csv");

    write_ranking_csv(run.table, dir / "rank_mem.csv");
    write_ranking_csv(reloaded, dir / "rank_disk.csv");
    CHECK(slurp(dir / "rank_mem.csv") == slurp(dir / "rank_disk.csv"));

    write_similarity_csv(similarity_order(run.table), dir / "sim_mem.csv");
    write_similarity_csv(similarity_order(reloaded), dir / "sim_disk.csv");
    CHECK(slurp(dir / "sim_mem.csv") == slurp(dir / "sim_disk.csv"));

    write_correlation_csv(correlation_matrix(run.table), dir / "corr_mem.csv");
    write_correlation_csv(correlation_matrix(reloaded), dir / "corr_disk.csv");
    CHECK(slurp(dir / "corr_mem.csv") == slurp(dir / "corr_disk.csv"));

    // and the score table itself round-trips bit-exactly
    write_score_table(reloaded, dir / "scores2.csv");
    CHECK(slurp(dir / "scores.csv") == slurp(dir / "scores2.csv"));
}

TEST_CASE("markdown renders at three decimals") {
    ScoreTable table;
    table.rows.push_back(eng_row_constant("somewhere", 1.0 / 3.0));
    const fs::path dir = temp_dir();
    write_ranking_md(rank_names(table, 5, 5), dir / "rank.md");
    const std::string text = slurp(dir / "rank.md");
    CHECK(text.find("0.333") != std::string::npos);
    CHECK(text.find("0.3333") == std::string::npos);
}

TEST_SUITE_END();
