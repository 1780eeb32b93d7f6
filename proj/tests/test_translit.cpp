#include <doctest.h>

#include <fstream>
#include <string>

#include "placenames/translit.hpp"

using namespace placenames;

TEST_SUITE_BEGIN("translit");

TEST_CASE("table is sorted and unique") {
    const auto entries = translit::entries();
    REQUIRE(entries.size() > 400);
    for (std::size_t i = 1; i < entries.size(); ++i) {
        CHECK(entries[i - 1].codepoint < entries[i].codepoint);
    }
}

TEST_CASE("built-in table matches the shipped data file") {
    // PLACENAMES_SOURCE_DIR is injected by the test build
    const std::string path = std::string(PLACENAMES_SOURCE_DIR) + "/core/data/translit_v1.tsv";
    std::ifstream in(path);
    REQUIRE_MESSAGE(in.good(), "missing " << path);
    const auto entries = translit::entries();
    std::size_t idx = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tab1 = line.find('\t');
        const auto tab2 = line.find('\t', tab1 + 1);
        REQUIRE(tab1 != std::string::npos);
        const auto cp = static_cast<char32_t>(std::stoul(line.substr(0, tab1), nullptr, 16));
        const std::string ascii = line.substr(tab1 + 1, tab2 - tab1 - 1);
        REQUIRE_MESSAGE(idx < entries.size(), "table shorter than data file");
        CHECK(entries[idx].codepoint == cp);
        CHECK(entries[idx].ascii == ascii);
        ++idx;
    }
    CHECK(idx == entries.size());
}

TEST_CASE("key mappings") {
    CHECK(std::string(translit::lookup(U'ß')) == "ss");
    CHECK(std::string(translit::lookup(U'ø')) == "o");
    CHECK(std::string(translit::lookup(U'æ')) == "ae");
    CHECK(std::string(translit::lookup(U'œ')) == "oe");
    CHECK(std::string(translit::lookup(U'å')) == "a");
    CHECK(std::string(translit::lookup(U'ð')) == "d");
    CHECK(std::string(translit::lookup(U'þ')) == "th");
    CHECK(std::string(translit::lookup(U'é')) == "e");
    CHECK(std::string(translit::lookup(U'ü')) == "u");
    CHECK(std::string(translit::lookup(U'ł')) == "l");
    CHECK(std::string(translit::lookup(U'Ø')) == "O");
    CHECK(translit::lookup(U'中') == nullptr);
    CHECK(translit::lookup(0x2020) == nullptr);  // dagger
}

TEST_CASE("replacements are pure ASCII letters") {
    for (const auto& entry : translit::entries()) {
        for (const char* p = entry.ascii; *p; ++p) {
            const bool alpha = (*p >= 'a' && *p <= 'z') || (*p >= 'A' && *p <= 'Z');
            CHECK_MESSAGE(alpha, "codepoint " << static_cast<unsigned>(entry.codepoint));
        }
    }
}

TEST_SUITE_END();
