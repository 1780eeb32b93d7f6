#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace placenames {

// The eleven corpora of the study plus EXT for externally supplied name
// lists (e.g. the Old English / Old Norse validation samples).
enum class Country : std::uint8_t {
    ENG,
    DEN,
    NOR,
    SWE,
    IRE,
    SCO,
    WAL,
    ROM,
    GER,
    FRA,
    NET,
    EXT,
};

inline constexpr std::size_t kCountryCount = 12;

// The ten England-Other classifier pairs, in canonical column order.
inline constexpr std::array<Country, 10> kPairCountries = {
    Country::DEN, Country::NOR, Country::SWE, Country::IRE, Country::SCO,
    Country::WAL, Country::ROM, Country::GER, Country::FRA, Country::NET,
};

constexpr std::string_view to_code(Country c) {
    switch (c) {
        case Country::ENG: return "ENG";
        case Country::DEN: return "DEN";
        case Country::NOR: return "NOR";
        case Country::SWE: return "SWE";
        case Country::IRE: return "IRE";
        case Country::SCO: return "SCO";
        case Country::WAL: return "WAL";
        case Country::ROM: return "ROM";
        case Country::GER: return "GER";
        case Country::FRA: return "FRA";
        case Country::NET: return "NET";
        case Country::EXT: return "EXT";
    }
    return "???";
}

constexpr std::string_view display_name(Country c) {
    switch (c) {
        case Country::ENG: return "England";
        case Country::DEN: return "Denmark";
        case Country::NOR: return "Norway";
        case Country::SWE: return "Sweden";
        case Country::IRE: return "Ireland";
        case Country::SCO: return "Scotland";
        case Country::WAL: return "Wales";
        case Country::ROM: return "Ancient Rome";
        case Country::GER: return "Germany";
        case Country::FRA: return "France";
        case Country::NET: return "Netherlands";
        case Country::EXT: return "External";
    }
    return "?";
}

std::optional<Country> country_from_code(std::string_view code);

// Index of a pair country within kPairCountries, -1 for ENG/EXT.
constexpr int pair_index(Country c) {
    for (std::size_t i = 0; i < kPairCountries.size(); ++i) {
        if (kPairCountries[i] == c) return static_cast<int>(i);
    }
    return -1;
}

}  // namespace placenames
