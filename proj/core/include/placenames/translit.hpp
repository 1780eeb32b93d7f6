#pragma once

#include <span>
#include <string_view>

namespace placenames::translit {

// Version tag of the bundled codepoint table (core/data/translit_v1.tsv).
inline constexpr std::string_view kTableVersion = "v1";

struct Entry {
    char32_t codepoint;
    const char* ascii;  // replacement; "" means "drop silently"
};

// Closest-Latin replacement for a codepoint outside [A-Za-z], or nullptr if
// the table has no entry. ASCII letters are not in the table; callers keep
// them as-is.
const char* lookup(char32_t cp);

// Full table, ascending by codepoint (exposed so tests can audit it against
// the shipped data file).
std::span<const Entry> entries();

}  // namespace placenames::translit
