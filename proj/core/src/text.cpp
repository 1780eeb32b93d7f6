#include "placenames/text.hpp"

namespace placenames::text {

std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<std::uint8_t>(s[k]); };
    const std::uint8_t b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return std::nullopt;
    }
    if (i + len > s.size()) {
        ++i;
        return std::nullopt;
    }
    for (int k = 1; k < len; ++k) {
        const std::uint8_t b = byte(i + k);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return std::nullopt;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // reject overlong encodings and surrogates
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++i;
        return std::nullopt;
    }
    i += len;
    return cp;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U' ':
        case U'\t':
        case U'\f':
        case U'\v':
        case U'\r':
        case U'\n':
        case 0x00A0:  // NBSP
        case 0x202F:  // narrow NBSP
        case 0x3000:  // ideographic space
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_hyphen(char32_t cp) {
    switch (cp) {
        case U'-':
        case 0x2010:  // hyphen
        case 0x2011:  // non-breaking hyphen
        case 0x2012:
        case 0x2013:  // en dash
        case 0x2014:  // em dash
        case 0x2212:  // minus sign
            return true;
        default:
            return false;
    }
}

bool is_apostrophe(char32_t cp) {
    switch (cp) {
        case U'\'':
        case U'`':
        case 0x2018:
        case 0x2019:
        case 0x02BC:
        case 0x02B9:
            return true;
        default:
            return false;
    }
}

bool is_period(char32_t cp) { return cp == U'.'; }

}  // namespace placenames::text
