#include "placenames/features.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "placenames/csv.hpp"
#include "placenames/errors.hpp"

namespace placenames {

namespace {

constexpr std::array<std::string_view, kPositionCount> kPositionNames = {
    "pos1", "pos2", "pos3", "pos4", "last", "last2", "last3", "last4",
};

// -1 for consonants; index into kVowels otherwise
constexpr std::array<int, 26> make_vowel_index() {
    std::array<int, 26> idx{};
    for (auto& v : idx) v = -1;
    for (std::size_t i = 0; i < kVowels.size(); ++i) idx[kVowels[i] - 'a'] = static_cast<int>(i);
    return idx;
}
constexpr std::array<int, 26> kVowelIndex = make_vowel_index();

constexpr std::array<int, 26> make_consonant_index() {
    std::array<int, 26> idx{};
    for (auto& v : idx) v = -1;
    for (std::size_t i = 0; i < kConsonants.size(); ++i) {
        idx[kConsonants[i] - 'a'] = static_cast<int>(i);
    }
    return idx;
}
constexpr std::array<int, 26> kConsonantIndex = make_consonant_index();

}  // namespace

int FeatureSchema::vowel_binary_index(char v) { return 208 + kVowelIndex[v - 'a']; }
int FeatureSchema::vowel_rate_index(char v) { return 214 + kVowelIndex[v - 'a']; }
int FeatureSchema::consonant_binary_index(char c) { return 221 + kConsonantIndex[c - 'a']; }
int FeatureSchema::consonant_rate_index(char c) { return 241 + kConsonantIndex[c - 'a']; }

FeatureSchema::FeatureSchema() {
    int i = 0;
    for (int p = 0; p < kPositionCount; ++p) {
        for (char c = 'a'; c <= 'z'; ++c) {
            slots_[i] = {SlotKind::pos_letter, static_cast<Position>(p), c};
            names_[i] = std::string(kPositionNames[p]) + '_' + c;
            ++i;
        }
    }
    for (const char v : kVowels) {
        slots_[i] = {SlotKind::vowel_binary, Position::first, v};
        names_[i] = std::string("vowel_") + v;
        ++i;
    }
    for (const char v : kVowels) {
        slots_[i] = {SlotKind::vowel_rate, Position::first, v};
        names_[i] = std::string("vrate_") + v;
        ++i;
    }
    slots_[i] = {SlotKind::total_vowel_rate, Position::first, 0};
    names_[i] = "total_vowel_rate";
    ++i;
    for (const char c : kConsonants) {
        slots_[i] = {SlotKind::consonant_binary, Position::first, c};
        names_[i] = std::string("cons_") + c;
        ++i;
    }
    for (const char c : kConsonants) {
        slots_[i] = {SlotKind::consonant_rate, Position::first, c};
        names_[i] = std::string("crate_") + c;
        ++i;
    }
    slots_[i] = {SlotKind::length, Position::first, 0};
    names_[i] = "length";
    ++i;
    slots_[i] = {SlotKind::entropy, Position::first, 0};
    names_[i] = "entropy";
    ++i;
    if (i != kFeatureCount) throw ContractError("schema slot count mismatch");
}

const FeatureSchema& FeatureSchema::v1() {
    static const FeatureSchema schema;
    return schema;
}

void extract(std::string_view name, std::span<float> out) {
    if (out.size() != kFeatureCount) throw ContractError("extract: output width");
    const std::size_t n = name.size();
    if (n == 0) throw ContractError("extract: empty name");
    for (const char c : name) {
        if (c < 'a' || c > 'z') {
            throw ContractError("extract: name must match ^[a-z]+$");
        }
    }
    std::memset(out.data(), 0, kFeatureCount * sizeof(float));

    // front and back windows are independent; for short names they overlap
    for (int p = 0; p < 4; ++p) {
        if (static_cast<std::size_t>(p) < n) {
            out[FeatureSchema::pos_letter_index(static_cast<Position>(p), name[p])] = 1.0f;
        }
    }
    for (int q = 0; q < 4; ++q) {
        if (static_cast<std::size_t>(q) < n) {
            out[FeatureSchema::pos_letter_index(static_cast<Position>(4 + q), name[n - 1 - q])] =
                1.0f;
        }
    }

    std::array<int, 26> letter_count{};
    for (const char c : name) letter_count[c - 'a']++;

    const float inv_len = 1.0f / static_cast<float>(n);
    int vowel_occurrences = 0;
    for (int l = 0; l < 26; ++l) {
        if (letter_count[l] == 0) continue;
        const char c = static_cast<char>('a' + l);
        if (kVowelIndex[l] >= 0) {
            out[FeatureSchema::vowel_binary_index(c)] = 1.0f;
            out[FeatureSchema::vowel_rate_index(c)] = inv_len;  // binary / length
            vowel_occurrences += letter_count[l];
        } else {
            out[FeatureSchema::consonant_binary_index(c)] = 1.0f;
            out[FeatureSchema::consonant_rate_index(c)] = inv_len;
        }
    }
    out[FeatureSchema::total_vowel_rate_index()] =
        static_cast<float>(vowel_occurrences) * inv_len;
    out[FeatureSchema::length_index()] = static_cast<float>(n);

    double entropy = 0.0;
    for (const int count : letter_count) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(n);
        entropy -= p * std::log2(p);
    }
    out[FeatureSchema::entropy_index()] = static_cast<float>(entropy);
}

std::array<float, kFeatureCount> extract(std::string_view name) {
    std::array<float, kFeatureCount> out;
    extract(name, out);
    return out;
}

LabeledDataset extract_batch(const CleanCorpus& corpus, Country pair) {
    if (pair == Country::ENG || pair == Country::EXT) {
        throw ConfigError("pair country must be one of the ten non-England corpora");
    }
    if (!corpus.has_country(Country::ENG) || !corpus.has_country(pair)) {
        throw ConfigError(std::string("corpus lacks ENG or ") + std::string(to_code(pair)));
    }
    LabeledDataset ds;
    ds.x = FeatureMatrix(kFeatureCount);
    const auto n_rows =
        static_cast<std::size_t>(corpus.count(Country::ENG) + corpus.count(pair));
    ds.x.reserve_rows(n_rows);
    ds.y.reserve(n_rows);
    ds.name_ref.reserve(n_rows);

    const auto add = [&](Country which, std::uint8_t label) {
        std::array<float, kFeatureCount> row;
        for (std::size_t i = 0; i < corpus.names.size(); ++i) {
            if (corpus.names[i].country != which) continue;
            extract(corpus.names[i].normalized, row);
            ds.x.push_row(row);
            ds.y.push_back(label);
            ds.name_ref.push_back(static_cast<std::int32_t>(i));
        }
    };
    add(Country::ENG, 1);
    add(pair, 0);
    return ds;
}

FeatureMatrix extract_matrix(std::span<const PlaceName> names) {
    FeatureMatrix m(kFeatureCount);
    m.reserve_rows(names.size());
    std::array<float, kFeatureCount> row;
    for (const PlaceName& n : names) {
        extract(n.normalized, row);
        m.push_row(row);
    }
    return m;
}

void write_feature_csv(const CleanCorpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write: " + path.string());
    const FeatureSchema& schema = FeatureSchema::v1();
    out << "name,country";
    for (int i = 0; i < kFeatureCount; ++i) out << ',' << schema.slot_name(i);
    out << '\n';
    std::array<float, kFeatureCount> row;
    for (const PlaceName& n : corpus.names) {
        extract(n.normalized, row);
        out << n.normalized << ',' << to_code(n.country);
        for (const float v : row) out << ',' << csv::format_double(v);
        out << '\n';
    }
}

}  // namespace placenames
