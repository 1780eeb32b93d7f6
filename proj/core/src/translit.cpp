#include "placenames/translit.hpp"

#include <algorithm>

namespace placenames::translit {

namespace {

constexpr Entry kTable[] = {
#include "translit_table.inc"
};

}  // namespace

const char* lookup(char32_t cp) {
    const auto* end = kTable + std::size(kTable);
    const auto* it = std::lower_bound(kTable, end, cp,
                                      [](const Entry& e, char32_t c) { return e.codepoint < c; });
    if (it != end && it->codepoint == cp) return it->ascii;
    return nullptr;
}

std::span<const Entry> entries() { return {kTable, std::size(kTable)}; }

}  // namespace placenames::translit
