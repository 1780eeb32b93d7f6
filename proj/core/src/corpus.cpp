#include "placenames/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "placenames/csv.hpp"
#include "placenames/errors.hpp"
#include "placenames/text.hpp"
#include "placenames/translit.hpp"

namespace placenames {

namespace {

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool ci_contains(std::string_view haystack, std::string_view needle) {
    if (needle.empty()) return true;
    const std::string h = ascii_lower(haystack);
    const std::string n = ascii_lower(needle);
    return h.find(n) != std::string::npos;
}

std::string codepoint_label(char32_t cp) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "U+%04X", static_cast<unsigned>(cp));
    return buf;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    const auto is_ascii_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    };
    while (b < e && is_ascii_space(s[b])) ++b;
    while (e > b && is_ascii_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    return in;
}

}  // namespace

std::string_view to_string(DropReason r) {
    switch (r) {
        case DropReason::multi_word: return "multi_word";
        case DropReason::hyphenated: return "hyphenated";
        case DropReason::duplicate_within: return "duplicate_within";
        case DropReason::duplicate_cross: return "duplicate_cross";
        case DropReason::empty_after_normalize: return "empty_after_normalize";
    }
    return "?";
}

std::optional<Country> country_from_code(std::string_view code) {
    const std::string up = [&] {
        std::string s(code);
        for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        return s;
    }();
    for (std::size_t i = 0; i < kCountryCount; ++i) {
        const auto c = static_cast<Country>(i);
        if (to_code(c) == up) return c;
    }
    return std::nullopt;
}

NormalizeResult normalize(std::string_view raw) {
    const auto reject = [&](DropReason reason, std::string detail = {}) {
        NormalizeResult r;
        r.accepted = false;
        r.reason = reason;
        r.detail = std::move(detail);
        return r;
    };

    // decode up front; structural rejects must come before transliteration
    std::vector<char32_t> cps;
    cps.reserve(raw.size());
    std::size_t i = 0;
    while (i < raw.size()) {
        const auto cp = text::decode_utf8(raw, i);
        if (!cp) return reject(DropReason::empty_after_normalize, "malformed UTF-8");
        cps.push_back(*cp);
    }
    while (!cps.empty() && text::is_space(cps.front())) cps.erase(cps.begin());
    while (!cps.empty() && text::is_space(cps.back())) cps.pop_back();
    if (cps.empty()) return reject(DropReason::empty_after_normalize, "blank");

    for (const char32_t cp : cps) {
        if (text::is_space(cp)) return reject(DropReason::multi_word);
        if (text::is_hyphen(cp)) return reject(DropReason::hyphenated);
    }

    std::string out;
    out.reserve(cps.size());
    for (const char32_t cp : cps) {
        if (text::is_apostrophe(cp) || text::is_period(cp)) continue;
        if (cp < 0x80) {
            const auto c = static_cast<unsigned char>(cp);
            if (std::isalpha(c)) {
                out.push_back(static_cast<char>(std::tolower(c)));
                continue;
            }
            return reject(DropReason::empty_after_normalize, codepoint_label(cp));
        }
        const char* mapped = translit::lookup(cp);
        if (mapped == nullptr) {
            return reject(DropReason::empty_after_normalize, codepoint_label(cp));
        }
        for (const char* p = mapped; *p; ++p) {
            out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(*p))));
        }
    }
    if (out.empty()) return reject(DropReason::empty_after_normalize, "empty after folding");

    NormalizeResult r;
    r.accepted = true;
    r.normalized = std::move(out);
    return r;
}

std::vector<RawEntry> load_country_file(const std::filesystem::path& path, Country country,
                                        const LoadOptions& options) {
    std::ifstream in = open_or_throw(path);
    std::vector<RawEntry> entries;
    std::string line;
    int line_no = 0;
    bool header_pending = options.skip_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::string name;
        if (options.delimiter == '\0') {
            name = trim(line);
        } else {
            const auto fields = csv::split_line(line, options.delimiter);
            if (options.type_column >= 0) {
                if (options.type_column >= static_cast<int>(fields.size())) continue;
                const std::string type = trim(fields[options.type_column]);
                const bool keep = std::any_of(
                    options.type_filter.begin(), options.type_filter.end(),
                    [&](const std::string& t) { return ascii_lower(t) == ascii_lower(type); });
                if (!keep) continue;
            }
            if (options.name_column >= static_cast<int>(fields.size())) continue;
            name = trim(fields[options.name_column]);
        }
        if (name.empty()) continue;
        entries.push_back(RawEntry{std::move(name), country, line_no});
    }
    if (in.bad()) throw ConfigError("I/O error reading: " + path.string());
    return entries;
}

CleanCorpus build_clean_corpus(const std::vector<RawEntry>& entries) {
    CleanCorpus corpus;
    std::array<bool, kCountryCount> seen_country{};

    struct Candidate {
        PlaceName name;
        RawEntry entry;
    };
    std::vector<Candidate> kept;
    kept.reserve(entries.size());

    // normalize + within-country dedup (first occurrence wins)
    std::unordered_set<std::string> within_seen;  // "CODE\x1fname"
    for (const RawEntry& e : entries) {
        seen_country[static_cast<std::size_t>(e.country)] = true;
        NormalizeResult r = normalize(e.text);
        if (!r.accepted) {
            corpus.drop_log.push_back({e, r.reason, std::move(r.detail)});
            continue;
        }
        std::string key = std::string(to_code(e.country)) + '\x1f' + r.normalized;
        if (!within_seen.insert(std::move(key)).second) {
            corpus.drop_log.push_back({e, DropReason::duplicate_within, r.normalized});
            continue;
        }
        kept.push_back({PlaceName{e.text, std::move(r.normalized), e.country}, e});
    }

    // cross-country dedup: a name present in two or more countries is
    // removed from all of them (no ground truth for its origin)
    std::unordered_map<std::string, std::uint32_t> country_mask;
    for (const Candidate& c : kept) {
        country_mask[c.name.normalized] |= 1u << static_cast<unsigned>(c.name.country);
    }
    for (Candidate& c : kept) {
        const std::uint32_t mask = country_mask[c.name.normalized];
        if ((mask & (mask - 1)) != 0) {  // more than one bit set
            std::string others;
            for (std::size_t i = 0; i < kCountryCount; ++i) {
                if ((mask >> i) & 1u) {
                    const auto cc = static_cast<Country>(i);
                    if (cc == c.name.country) continue;
                    if (!others.empty()) others += '+';
                    others += to_code(cc);
                }
            }
            corpus.drop_log.push_back({c.entry, DropReason::duplicate_cross, std::move(others)});
            continue;
        }
        corpus.counts[static_cast<std::size_t>(c.name.country)]++;
        corpus.names.push_back(std::move(c.name));
    }

    for (std::size_t i = 0; i < kCountryCount; ++i) {
        if (seen_country[i] && corpus.counts[i] == 0) {
            throw ConfigError(std::string("country ") + std::string(to_code(static_cast<Country>(i))) +
                              " has no names left after cleaning");
        }
    }
    return corpus;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest parse error in " + path.string() + ": " + e.what());
    }
    if (!doc.contains("countries") || !doc["countries"].is_array()) {
        throw ConfigError("manifest missing 'countries' array: " + path.string());
    }
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::vector<ManifestEntry> manifest;
    for (const auto& item : doc["countries"]) {
        ManifestEntry entry;
        const std::string code = item.value("code", "");
        const auto country = country_from_code(code);
        if (!country) throw ConfigError("manifest: unknown country code '" + code + "'");
        entry.country = *country;
        std::filesystem::path p = item.value("path", "");
        if (p.empty()) throw ConfigError("manifest: missing path for " + code);
        entry.path = p.is_absolute() ? p : base / p;
        if (!std::filesystem::exists(entry.path)) {
            throw ConfigError("manifest: file not found: " + entry.path.string());
        }
        const std::string delim = item.value("delimiter", "");
        if (delim.size() > 1) throw ConfigError("manifest: delimiter must be one character");
        entry.options.delimiter = delim.empty() ? '\0' : delim[0];
        entry.options.name_column = item.value("name_column", 0);
        entry.options.type_column = item.value("type_column", -1);
        if (item.contains("type_filter")) {
            for (const auto& t : item["type_filter"]) {
                entry.options.type_filter.push_back(t.get<std::string>());
            }
        }
        entry.options.skip_header = item.value("skip_header", false);
        manifest.push_back(std::move(entry));
    }
    if (manifest.empty()) throw ConfigError("manifest lists no countries: " + path.string());
    return manifest;
}

CleanCorpus build_corpus_from_manifest(const std::vector<ManifestEntry>& manifest) {
    std::vector<RawEntry> entries;
    for (const ManifestEntry& m : manifest) {
        auto part = load_country_file(m.path, m.country, m.options);
        entries.insert(entries.end(), std::make_move_iterator(part.begin()),
                       std::make_move_iterator(part.end()));
    }
    return build_clean_corpus(entries);
}

void write_corpus(const CleanCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    for (const PlaceName& n : corpus.names) {
        out << to_code(n.country) << '\t' << n.normalized << '\n';
    }
    if (!out) throw ConfigError("write failed: " + path.string());
}

CleanCorpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    CleanCorpus corpus;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("corpus file line " + std::to_string(line_no) + ": expected CODE<TAB>name");
        }
        const auto country = country_from_code(line.substr(0, tab));
        if (!country) {
            throw DataError("corpus file line " + std::to_string(line_no) + ": unknown country code");
        }
        std::string name = line.substr(tab + 1);
        const bool ok = !name.empty() &&
                        std::all_of(name.begin(), name.end(), [](char c) { return c >= 'a' && c <= 'z'; });
        if (!ok) {
            throw DataError("corpus file line " + std::to_string(line_no) +
                            ": name must match ^[a-z]+$ (got '" + name + "')");
        }
        corpus.counts[static_cast<std::size_t>(*country)]++;
        corpus.names.push_back(PlaceName{name, std::move(name), *country});
    }
    return corpus;
}

void write_drop_log(const CleanCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    out << "raw,country,reason,detail\n";
    for (const DropRecord& d : corpus.drop_log) {
        out << csv::escape_field(d.entry.text) << ',' << to_code(d.entry.country) << ','
            << to_string(d.reason) << ',' << csv::escape_field(d.detail) << '\n';
    }
}

namespace {

int find_column(const std::vector<std::string>& headers, const std::string& wanted) {
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (ascii_lower(trim(headers[i])) == ascii_lower(wanted)) return static_cast<int>(i);
    }
    for (std::size_t i = 0; i < headers.size(); ++i) {
        if (ci_contains(headers[i], wanted)) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace

std::vector<DerivationEntry> load_derivation_csv(const std::filesystem::path& path,
                                                 const DerivationCsvOptions& options) {
    std::ifstream in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty derivation file: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto headers = csv::split_line(line, options.delimiter);
    const int name_col = find_column(headers, options.name_header);
    const int lang_col = find_column(headers, options.languages_header);
    const int deriv_col = find_column(headers, options.derivation_header);
    if (name_col < 0 || lang_col < 0 || deriv_col < 0) {
        throw ConfigError("derivation file " + path.string() + ": could not locate '" +
                          options.name_header + "'/'" + options.languages_header + "'/'" +
                          options.derivation_header + "' columns in header");
    }
    std::vector<DerivationEntry> entries;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = csv::split_line(line, options.delimiter);
        const auto get = [&](int col) -> std::string {
            return col < static_cast<int>(fields.size()) ? trim(fields[col]) : std::string();
        };
        DerivationEntry e{get(name_col), get(lang_col), get(deriv_col)};
        if (e.name.empty()) continue;
        entries.push_back(std::move(e));
    }
    return entries;
}

DerivationRecipe oe_derivation_recipe() {
    return DerivationRecipe{
        "oe",
        {"Old English", "Anglian", "Kentish", "Mercian", "Northumbrian", "West-Saxon"},
        {"Old English"},
        {"Norse", "Scand"},
    };
}

DerivationRecipe on_derivation_recipe() {
    return DerivationRecipe{
        "on",
        {"Old Norse", "Old Danish", "Old East Scandinavian", "Old Norwegian",
         "Old West Scandinavian"},
        {},
        {"English", "Saxon", "Mercian", "Northumbrian", "Kentish", "Anglian"},
    };
}

std::vector<PlaceName> filter_derivation(const std::vector<DerivationEntry>& entries,
                                         const DerivationRecipe& recipe) {
    std::vector<PlaceName> out;
    std::unordered_set<std::string> seen;
    for (const DerivationEntry& e : entries) {
        const bool lang_hit =
            recipe.include_langs.empty() ||
            std::any_of(recipe.include_langs.begin(), recipe.include_langs.end(),
                        [&](const std::string& t) { return ci_contains(e.languages, t); });
        if (!lang_hit) continue;
        const bool required = std::all_of(
            recipe.require_in_derivation.begin(), recipe.require_in_derivation.end(),
            [&](const std::string& t) { return ci_contains(e.derivation, t); });
        if (!required) continue;
        const bool excluded = std::any_of(
            recipe.exclude_in_derivation.begin(), recipe.exclude_in_derivation.end(),
            [&](const std::string& t) { return ci_contains(e.derivation, t); });
        if (excluded) continue;
        if (e.name.find('/') != std::string::npos) continue;  // multiple recorded versions
        NormalizeResult r = normalize(e.name);
        if (!r.accepted) continue;  // multi-word, hyphenated, unfoldable
        if (!seen.insert(r.normalized).second) continue;
        out.push_back(PlaceName{e.name, std::move(r.normalized), Country::EXT});
    }
    return out;
}

std::vector<PlaceName> load_external_names(const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);
    std::vector<PlaceName> out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string name = trim(line);
        if (name.empty()) continue;
        NormalizeResult r = normalize(name);
        if (!r.accepted) continue;
        if (!seen.insert(r.normalized).second) continue;
        out.push_back(PlaceName{name, std::move(r.normalized), Country::EXT});
    }
    return out;
}

}  // namespace placenames
