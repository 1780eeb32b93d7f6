#include "placenames/score_table.hpp"

#include <fstream>

#include "placenames/csv.hpp"
#include "placenames/errors.hpp"

namespace placenames {

void write_score_table(const ScoreTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "name,country";
    for (const Country c : kPairCountries) out << ',' << to_code(c);
    out << ",ensemble\n";
    for (const ScoreRow& row : table.rows) {
        out << csv::escape_field(row.name) << ',' << to_code(row.country);
        for (int i = 0; i < 10; ++i) {
            out << ',';
            if (row.has_score(i)) out << csv::format_double(row.scores[i]);
        }
        out << ',';
        if (row.has_ensemble()) out << csv::format_double(row.ensemble);
        out << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

ScoreTable read_score_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty score table: " + path.string());
    ScoreTable table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = csv::split_line(line, ',');
        if (fields.size() != 13) {
            throw DataError("score table line " + std::to_string(line_no) + ": expected 13 columns");
        }
        ScoreRow row;
        row.name = fields[0];
        const auto country = country_from_code(fields[1]);
        if (!country) {
            throw DataError("score table line " + std::to_string(line_no) + ": bad country code");
        }
        row.country = *country;
        for (int i = 0; i < 10; ++i) {
            if (!fields[2 + i].empty()) row.scores[i] = csv::parse_double(fields[2 + i]);
        }
        if (!fields[12].empty()) row.ensemble = csv::parse_double(fields[12]);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace placenames
