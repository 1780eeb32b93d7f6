#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace placenames::text {

// Decodes the UTF-8 sequence starting at s[i]; advances i past it.
// Returns nullopt (and advances by one byte) on malformed input.
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& i);

// Character classes used by corpus normalization. Unicode variants are
// folded in: NBSP and the general-punctuation spaces count as whitespace,
// en/em dashes count as hyphens, and curly quotes as apostrophes.
bool is_space(char32_t cp);
bool is_hyphen(char32_t cp);
bool is_apostrophe(char32_t cp);
bool is_period(char32_t cp);

}  // namespace placenames::text
