#include "placenames/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "placenames/csv.hpp"
#include "placenames/errors.hpp"

namespace placenames {

namespace {

std::vector<const ScoreRow*> eng_rows_by_score(const ScoreTable& table) {
    std::vector<const ScoreRow*> rows;
    for (const ScoreRow& row : table.rows) {
        if (row.country != Country::ENG) continue;
        if (!row.has_ensemble()) {
            throw DataError("ranking: ENG row '" + row.name + "' has no ensemble score");
        }
        rows.push_back(&row);
    }
    std::sort(rows.begin(), rows.end(), [](const ScoreRow* a, const ScoreRow* b) {
        if (a->ensemble != b->ensemble) return a->ensemble > b->ensemble;
        return a->name < b->name;
    });
    return rows;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    return out;
}

std::string fixed3(double v) { return csv::format_fixed(v, 3); }

std::string p_label(double p) { return p < 0.001 ? "<.001" : fixed3(p); }

}  // namespace

RankingReport rank_names(const ScoreTable& table, int top_n, int bottom_n) {
    const auto rows = eng_rows_by_score(table);
    RankingReport report;
    report.total = rows.size();
    const auto n = static_cast<int>(rows.size());
    for (int i = 0; i < std::min(top_n, n); ++i) {
        report.top.push_back({i + 1, rows[i]->name, rows[i]->ensemble});
    }
    for (int i = std::max(0, n - bottom_n); i < n; ++i) {
        report.bottom.push_back({i + 1, rows[i]->name, rows[i]->ensemble});
    }
    return report;
}

const ScoreRow& name_breakdown(const ScoreTable& table, std::string_view normalized_name) {
    for (const ScoreRow& row : table.rows) {
        if (row.name == normalized_name) return row;
    }
    throw DataError("name not found in score table: '" + std::string(normalized_name) + "'");
}

SimilarityReport similarity_order(const ScoreTable& table) {
    std::array<double, 10> sums{};
    std::array<std::int64_t, 10> counts{};
    for (const ScoreRow& row : table.rows) {
        if (row.country != Country::ENG) continue;
        for (int p = 0; p < 10; ++p) {
            if (!row.has_score(p)) {
                throw DataError("similarity: ENG row '" + row.name + "' missing pair score");
            }
            sums[p] += row.scores[p];
            counts[p]++;
        }
    }
    SimilarityReport report;
    for (int p = 0; p < 10; ++p) {
        if (counts[p] == 0) throw DataError("similarity: no ENG rows");
        report.rows.push_back({kPairCountries[p], sums[p] / static_cast<double>(counts[p])});
    }
    std::sort(report.rows.begin(), report.rows.end(), [](const auto& a, const auto& b) {
        if (a.mean != b.mean) return a.mean < b.mean;
        return to_code(a.pair) < to_code(b.pair);
    });
    return report;
}

std::int64_t count_non_english(const ScoreTable& table, double cutpoint) {
    std::int64_t count = 0;
    for (const ScoreRow& row : table.rows) {
        if (row.country != Country::ENG) continue;
        if (!row.has_ensemble()) throw DataError("count_non_english: missing ensemble");
        if (row.ensemble < cutpoint) ++count;
    }
    return count;
}

OeOnReport oe_on_validation(const ScoreTable& oe, const ScoreTable& on) {
    const int den = pair_index(Country::DEN);
    const int swe = pair_index(Country::SWE);
    const int nor = pair_index(Country::NOR);
    const auto column_values = [&](const ScoreTable& t, int which) {
        std::vector<double> vals;
        vals.reserve(t.rows.size());
        for (const ScoreRow& row : t.rows) {
            double v = 0.0;
            switch (which) {
                case 0: v = row.scores[den]; break;
                case 1: v = row.scores[swe]; break;
                case 2: v = row.scores[nor]; break;
                case 3: v = (row.scores[den] + row.scores[swe] + row.scores[nor]) / 3.0; break;
                case 4: v = row.ensemble; break;
                default: break;
            }
            if (std::isnan(v)) {
                throw DataError("oe_on_validation: score table is missing required columns");
            }
            vals.push_back(v);
        }
        return vals;
    };
    const auto mean = [](const std::vector<double>& v) {
        double s = 0.0;
        for (const double x : v) s += x;
        return s / static_cast<double>(v.size());
    };

    OeOnReport report;
    report.oe_n = static_cast<std::int64_t>(oe.rows.size());
    report.on_n = static_cast<std::int64_t>(on.rows.size());
    const std::array<std::string, 5> labels = {"Eng-Den", "Eng-Swe", "Eng-Nor", "Ave Scand",
                                               "Eng-Other"};
    for (int c = 0; c < 5; ++c) {
        const std::vector<double> oe_vals = column_values(oe, c);
        const std::vector<double> on_vals = column_values(on, c);
        OeOnReport::Column col;
        col.label = labels[c];
        col.oe_mean = mean(oe_vals);
        col.on_mean = mean(on_vals);
        // the ensemble column's variances are comparable; the paper pools there
        col.t_test = c == 4 ? pooled_t(oe_vals, on_vals) : welch_t(oe_vals, on_vals);
        col.mw_test = mann_whitney(oe_vals, on_vals);
        report.columns[c] = std::move(col);
    }
    return report;
}

void write_ranking_csv(const ScoreTable& table, const std::filesystem::path& path) {
    const auto rows = eng_rows_by_score(table);
    auto out = open_out(path);
    out << "rank,name,ensemble\n";
    int rank = 1;
    for (const ScoreRow* row : rows) {
        out << rank++ << ',' << csv::escape_field(row->name) << ','
            << csv::format_double(row->ensemble) << '\n';
    }
}

void write_ranking_md(const RankingReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# Highest and lowest scoring English place names\n\n";
    out << "| Rank | Place name | England-Other score |\n|---:|---|---:|\n";
    for (const auto& row : report.top) {
        out << "| " << row.rank << " | " << row.name << " | " << fixed3(row.score) << " |\n";
    }
    out << "| ... | | |\n";
    for (const auto& row : report.bottom) {
        out << "| " << row.rank << " | " << row.name << " | " << fixed3(row.score) << " |\n";
    }
    out << "\n" << report.total << " English names ranked.\n";
}

void write_similarity_csv(const SimilarityReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "pair,mean_eng_score\n";
    for (const auto& row : report.rows) {
        out << to_code(row.pair) << ',' << csv::format_double(row.mean) << '\n';
    }
}

void write_similarity_md(const SimilarityReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# Mean scores of English place names on the ten classifiers\n\n";
    out << "| Classifier | Mean score |\n|---|---:|\n";
    for (const auto& row : report.rows) {
        out << "| England-" << display_name(row.pair) << " | " << fixed3(row.mean) << " |\n";
    }
}

void write_correlation_csv(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "pair";
    for (const Country c : kPairCountries) out << ',' << to_code(c);
    out << '\n';
    for (int i = 0; i < 10; ++i) {
        out << to_code(kPairCountries[i]);
        for (int j = 0; j < 10; ++j) {
            out << ',';
            if (i != j) out << csv::format_double(matrix.r_at(i, j));
        }
        out << '\n';
    }
    out << "mean";
    for (int j = 0; j < 10; ++j) out << ',' << csv::format_double(matrix.column_means[j]);
    out << '\n';
}

void write_correlation_md(const CorrelationMatrix& matrix, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# Inter-correlations between classifier scores\n\n|  |";
    for (const Country c : kPairCountries) out << ' ' << to_code(c) << " |";
    out << "\n|---|";
    for (int j = 0; j < 10; ++j) out << "---:|";
    out << '\n';
    for (int i = 0; i < 10; ++i) {
        out << "| " << to_code(kPairCountries[i]) << " |";
        for (int j = 0; j < 10; ++j) {
            if (i == j) out << "  |";
            else out << ' ' << csv::format_fixed(matrix.r_at(i, j), 2) << " |";
        }
        out << '\n';
    }
    out << "| Mean |";
    for (int j = 0; j < 10; ++j) out << ' ' << csv::format_fixed(matrix.column_means[j], 2) << " |";
    out << "\n\nAll correlations significant at p < .01.\n";
}

void write_breakdown_md(const ScoreRow& row, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# Scores for '" << row.name << "'\n\n| Classifier | Score |\n|---|---:|\n";
    for (int p = 0; p < 10; ++p) {
        out << "| England-" << display_name(kPairCountries[p]) << " | ";
        out << (row.has_score(p) ? fixed3(row.scores[p]) : "-") << " |\n";
    }
    out << "| Average (England-Other) | " << (row.has_ensemble() ? fixed3(row.ensemble) : "-")
        << " |\n";
}

void write_oe_on_csv(const OeOnReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "row";
    for (const auto& col : report.columns) out << ',' << col.label;
    out << '\n';
    out << "oe_mean_n" << report.oe_n;
    for (const auto& col : report.columns) out << ',' << csv::format_double(col.oe_mean);
    out << '\n';
    out << "on_mean_n" << report.on_n;
    for (const auto& col : report.columns) out << ',' << csv::format_double(col.on_mean);
    out << '\n';
    out << "t_p";
    for (const auto& col : report.columns) out << ',' << csv::format_double(col.t_test.p_value);
    out << '\n';
    out << "mw_p";
    for (const auto& col : report.columns) out << ',' << csv::format_double(col.mw_test.p_value);
    out << '\n';
}

void write_oe_on_md(const OeOnReport& report, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "# OE and ON place name scores on Scandinavian and English classifiers\n\n|  |";
    for (const auto& col : report.columns) out << ' ' << col.label << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < report.columns.size(); ++i) out << "---:|";
    out << '\n';
    out << "| OE Av (n=" << report.oe_n << ") |";
    for (const auto& col : report.columns) out << ' ' << fixed3(col.oe_mean) << " |";
    out << "\n| ON Av (n=" << report.on_n << ") |";
    for (const auto& col : report.columns) out << ' ' << fixed3(col.on_mean) << " |";
    out << "\n| T-test |";
    for (const auto& col : report.columns) out << ' ' << p_label(col.t_test.p_value) << " |";
    out << "\n| Mann-Whitney |";
    for (const auto& col : report.columns) out << ' ' << p_label(col.mw_test.p_value) << " |";
    out << '\n';
}

void write_letter_frequency_csv(std::span<const PlaceName> names,
                                const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "position,letter,frequency\n";
    static constexpr std::array<std::string_view, 8> kLabels = {
        "first", "second", "third", "fourth", "last", "second_last", "third_last", "fourth_last"};
    for (int p = 0; p < kPositionCount; ++p) {
        const auto freqs = letter_position_frequencies(names, static_cast<Position>(p));
        for (const auto& [letter, freq] : freqs) {
            out << kLabels[p] << ',' << letter << ',' << csv::format_double(freq) << '\n';
        }
    }
}

}  // namespace placenames
