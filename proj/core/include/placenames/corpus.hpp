#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "placenames/country.hpp"

namespace placenames {

enum class DropReason : std::uint8_t {
    multi_word,
    hyphenated,
    duplicate_within,
    duplicate_cross,
    empty_after_normalize,
};

std::string_view to_string(DropReason r);

struct RawEntry {
    std::string text;  // as read (bytes preserved, surrounding whitespace trimmed)
    Country country;
    int source_line = 0;
};

struct PlaceName {
    std::string raw;
    std::string normalized;  // lowercase a-z only
    Country country;
};

struct DropRecord {
    RawEntry entry;
    DropReason reason;
    std::string detail;  // offending character, duplicate partner, ...
};

struct CleanCorpus {
    std::vector<PlaceName> names;
    std::array<std::int64_t, kCountryCount> counts{};
    std::vector<DropRecord> drop_log;

    std::int64_t count(Country c) const { return counts[static_cast<std::size_t>(c)]; }
    bool has_country(Country c) const { return count(c) > 0; }
};

struct NormalizeResult {
    bool accepted = false;
    std::string normalized;
    DropReason reason = DropReason::empty_after_normalize;
    std::string detail;
};

// Folds a raw name to the 26-letter lowercase alphabet. Multi-word and
// hyphenated names are rejected before transliteration; apostrophes and
// periods are stripped; everything else must resolve through the bundled
// table (translit_v1) or the name is rejected with the offending character
// in `detail`.
NormalizeResult normalize(std::string_view raw);

struct LoadOptions {
    char delimiter = '\0';  // '\0': whole line is the name
    int name_column = 0;
    int type_column = -1;                  // optional type filter, e.g. Danish "By"/"Bydel"
    std::vector<std::string> type_filter;  // keep rows whose type is listed
    bool skip_header = false;
};

// One RawEntry per non-blank line (selected column when delimited), in file
// order. Rows rejected by the type filter never become entries. Unreadable
// file -> ConfigError. Lines with malformed UTF-8 are kept here and rejected
// by normalize() later so that the corpus drop log accounts for them.
std::vector<RawEntry> load_country_file(const std::filesystem::path& path, Country country,
                                        const LoadOptions& options = {});

// Normalizes, removes within-country duplicates (first kept), then removes
// names occurring in more than one country from all of them. Every removed
// entry is drop-logged. A country whose entries all drop -> ConfigError.
CleanCorpus build_clean_corpus(const std::vector<RawEntry>& entries);

// --- manifest (country-code -> file + load options) ---

struct ManifestEntry {
    Country country;
    std::filesystem::path path;
    LoadOptions options;
};

// JSON manifest, paths resolved relative to the manifest file. Missing
// referenced file -> ConfigError naming the path.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

CleanCorpus build_corpus_from_manifest(const std::vector<ManifestEntry>& manifest);

// --- canonical corpus file: "CODE<TAB>normalized" one record per line ---

void write_corpus(const CleanCorpus& corpus, const std::filesystem::path& path);
CleanCorpus read_corpus(const std::filesystem::path& path);

// drop log CSV: raw,country,reason,detail
void write_drop_log(const CleanCorpus& corpus, const std::filesystem::path& path);

// --- derivation-based validation samples (Key to English Place-Names shape) ---

struct DerivationEntry {
    std::string name;
    std::string languages;
    std::string derivation;
};

struct DerivationCsvOptions {
    char delimiter = ',';
    // header names, matched case-insensitively (exact first, then substring)
    std::string name_header = "name";
    std::string languages_header = "language";
    std::string derivation_header = "derivation";
};

std::vector<DerivationEntry> load_derivation_csv(const std::filesystem::path& path,
                                                 const DerivationCsvOptions& options = {});

struct DerivationRecipe {
    std::string label;
    std::vector<std::string> include_langs;           // languages field matches any
    std::vector<std::string> require_in_derivation;   // all must appear
    std::vector<std::string> exclude_in_derivation;   // none may appear
};

// The two published recipes for the Old English / Old Norse samples.
DerivationRecipe oe_derivation_recipe();
DerivationRecipe on_derivation_recipe();

// Applies a recipe: language include -> derivation require -> derivation
// exclude (all case-insensitive substring matches), then drops multi-word,
// hyphenated and slash-containing names, normalizes and dedups. Returns
// PlaceNames labeled Country::EXT. An empty result is not an error.
std::vector<PlaceName> filter_derivation(const std::vector<DerivationEntry>& entries,
                                         const DerivationRecipe& recipe);

// Plain name list (one per line) -> normalized EXT PlaceNames; silently
// drops lines normalize rejects, dedups.
std::vector<PlaceName> load_external_names(const std::filesystem::path& path);

}  // namespace placenames
