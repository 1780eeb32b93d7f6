#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "placenames/country.hpp"

namespace placenames {

// One scored name. `scores` follows kPairCountries order; absent cells are
// NaN. ENG rows carry all ten pair scores plus their arithmetic mean in
// `ensemble`; a non-ENG corpus row carries only its own pair's score; EXT
// rows (external scoring) carry whatever pairs were requested.
struct ScoreRow {
    std::string name;
    Country country = Country::EXT;
    std::array<double, 10> scores;
    double ensemble = std::numeric_limits<double>::quiet_NaN();

    ScoreRow() { scores.fill(std::numeric_limits<double>::quiet_NaN()); }

    bool has_score(int pair_idx) const { return !std::isnan(scores[pair_idx]); }
    bool has_ensemble() const { return !std::isnan(ensemble); }
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
};

// CSV: name,country,DEN,NOR,SWE,IRE,SCO,WAL,ROM,GER,FRA,NET,ensemble with
// empty cells for absent scores. Doubles are written in shortest round-trip
// form, so read_score_table(write_score_table(t)) reproduces t bit-exactly.
void write_score_table(const ScoreTable& table, const std::filesystem::path& path);
ScoreTable read_score_table(const std::filesystem::path& path);

}  // namespace placenames
