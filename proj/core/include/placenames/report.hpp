#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "placenames/pipeline.hpp"
#include "placenames/score_table.hpp"
#include "placenames/stats.hpp"

namespace placenames {

// Rankings are computed over ENG rows only, descending by ensemble score at
// full stored precision, score ties broken lexicographically by name.
struct RankingReport {
    struct Row {
        int rank = 0;
        std::string name;
        double score = 0.0;
    };
    std::vector<Row> top;
    std::vector<Row> bottom;  // globally-ranked, lowest last
    std::size_t total = 0;
};

RankingReport rank_names(const ScoreTable& table, int top_n, int bottom_n);

// Row for a single name (first match); DataError when absent.
const ScoreRow& name_breakdown(const ScoreTable& table, std::string_view normalized_name);

// Mean ENG score per pair classifier, ascending (Table 6 shape): the lower
// the mean, the harder that pair's names are to tell from English ones.
struct SimilarityReport {
    struct Row {
        Country pair = Country::EXT;
        double mean = 0.0;
    };
    std::vector<Row> rows;
};

SimilarityReport similarity_order(const ScoreTable& table);

// ENG names whose ensemble score falls below the cut point.
std::int64_t count_non_english(const ScoreTable& table, double cutpoint);

// OE/ON validation (Table 3 shape). Columns: Eng-Den, Eng-Swe, Eng-Nor,
// Scandinavian average, ensemble. The t row uses Welch's test except the
// ensemble column, which uses the pooled test; Mann-Whitney everywhere.
struct OeOnReport {
    struct Column {
        std::string label;
        double oe_mean = 0.0;
        double on_mean = 0.0;
        TestResult t_test;
        TestResult mw_test;
    };
    std::int64_t oe_n = 0;
    std::int64_t on_n = 0;
    std::array<Column, 5> columns;
};

OeOnReport oe_on_validation(const ScoreTable& oe, const ScoreTable& on);

// --- writers; *.csv carry full precision, *.md render at 3 decimals ---

void write_ranking_csv(const ScoreTable& table, const std::filesystem::path& path);
void write_ranking_md(const RankingReport& report, const std::filesystem::path& path);
void write_similarity_csv(const SimilarityReport& report, const std::filesystem::path& path);
void write_similarity_md(const SimilarityReport& report, const std::filesystem::path& path);
void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path);
void write_correlation_md(const CorrelationMatrix& matrix, const std::filesystem::path& path);
void write_breakdown_md(const ScoreRow& row, const std::filesystem::path& path);
void write_oe_on_csv(const OeOnReport& report, const std::filesystem::path& path);
void write_oe_on_md(const OeOnReport& report, const std::filesystem::path& path);
void write_letter_frequency_csv(std::span<const PlaceName> names,
                                const std::filesystem::path& path);

}  // namespace placenames
