#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace placenames::csv {

// RFC-4180-ish single-line field splitting. Quoted fields may contain the
// delimiter and doubled quotes; embedded newlines are not supported (none of
// the corpus formats carry them).
std::vector<std::string> split_line(std::string_view line, char delimiter);

// Quotes a field iff it contains the delimiter, a quote, or leading/trailing
// whitespace.
std::string escape_field(std::string_view field, char delimiter = ',');

// Shortest round-trip decimal form (to_chars); parsing it back yields the
// identical double, which is what keeps persisted score tables and the
// reports regenerated from them byte-for-byte equal.
std::string format_double(double v);
double parse_double(std::string_view s);

// Fixed-precision rendering for human-facing report tables.
std::string format_fixed(double v, int decimals);

}  // namespace placenames::csv
