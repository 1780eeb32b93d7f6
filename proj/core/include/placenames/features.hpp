#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "placenames/corpus.hpp"
#include "placenames/dataset.hpp"

namespace placenames {

// 8 letter positions x 26 letters, 6 vowel presence flags, 6 vowel rates,
// total vowel rate, 20 consonant presence flags, 20 consonant rates, length,
// entropy: 208 + 6 + 6 + 1 + 20 + 20 + 1 + 1 = 263.
inline constexpr int kFeatureCount = 263;
inline constexpr std::string_view kSchemaVersion = "fv1";

inline constexpr std::array<char, 6> kVowels = {'a', 'e', 'i', 'o', 'u', 'y'};
inline constexpr std::array<char, 20> kConsonants = {'b', 'c', 'd', 'f', 'g', 'h', 'j',
                                                     'k', 'l', 'm', 'n', 'p', 'q', 'r',
                                                     's', 't', 'v', 'w', 'x', 'z'};

// Letter windows, front then back: 1st..4th, last, 2nd-last, 3rd-last, 4th-last.
enum class Position : std::uint8_t {
    first,
    second,
    third,
    fourth,
    last,
    second_last,
    third_last,
    fourth_last,
};
inline constexpr int kPositionCount = 8;

enum class SlotKind : std::uint8_t {
    pos_letter,
    vowel_binary,
    vowel_rate,
    total_vowel_rate,
    consonant_binary,
    consonant_rate,
    length,
    entropy,
};

struct SlotDescriptor {
    SlotKind kind;
    Position position;  // pos_letter only
    char letter;        // pos_letter / vowel / consonant slots
};

class FeatureSchema {
public:
    static const FeatureSchema& v1();

    std::span<const SlotDescriptor> slots() const { return slots_; }
    const std::string& slot_name(int i) const { return names_[i]; }

    static constexpr int pos_letter_index(Position p, char letter) {
        return static_cast<int>(p) * 26 + (letter - 'a');
    }
    static int vowel_binary_index(char v);        // 208..213
    static int vowel_rate_index(char v);          // 214..219
    static constexpr int total_vowel_rate_index() { return 220; }
    static int consonant_binary_index(char c);    // 221..240
    static int consonant_rate_index(char c);      // 241..260
    static constexpr int length_index() { return 261; }
    static constexpr int entropy_index() { return 262; }

private:
    FeatureSchema();
    std::array<SlotDescriptor, kFeatureCount> slots_;
    std::array<std::string, kFeatureCount> names_;
};

// Fills the 263 slots for a normalized name (^[a-z]+$; ContractError
// otherwise). Deterministic; position groups beyond the name's length stay
// all-zero; entropy is Shannon bits per letter of the name's own character
// distribution.
void extract(std::string_view name, std::span<float> out);
std::array<float, kFeatureCount> extract(std::string_view name);

// Rows: every ENG name (label 1) followed by every `pair` name (label 0),
// each with a back-reference into corpus.names.
LabeledDataset extract_batch(const CleanCorpus& corpus, Country pair);

// Feature matrix for an arbitrary name list (external scoring).
FeatureMatrix extract_matrix(std::span<const PlaceName> names);

// CSV export: header "name,country,<263 slot names>".
void write_feature_csv(const CleanCorpus& corpus, const std::filesystem::path& path);

}  // namespace placenames
