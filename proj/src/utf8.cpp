#include "warrantscore/utf8.hpp"

namespace warrantscore::utf8 {

namespace {

// Decodes one scalar value starting at text[i]; advances i by the sequence
// length (1 on malformed input, yielding U+FFFD).
char32_t decode_at(std::string_view text, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    const unsigned char b0 = byte(i);
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
        return 0xFFFD;
    }
    if (i + len > text.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int k = 1; k < len; ++k) {
        const unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    // Overlong encodings and surrogates map to U+FFFD as well.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++i;
        return 0xFFFD;
    }
    i += len;
    return cp;
}

void encode_to(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::u32string decode(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) out.push_back(decode_at(text, i));
    return out;
}

std::string encode(std::u32string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) encode_to(cp, out);
    return out;
}

std::size_t length(std::string_view text) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < text.size()) {
        decode_at(text, i);
        ++n;
    }
    return n;
}

std::string substr(std::string_view text, std::size_t pos, std::size_t n) {
    std::size_t i = 0;
    std::size_t cp_index = 0;
    while (i < text.size() && cp_index < pos) {
        decode_at(text, i);
        ++cp_index;
    }
    const std::size_t byte_start = i;
    std::size_t taken = 0;
    while (i < text.size() && taken < n) {
        decode_at(text, i);
        ++taken;
    }
    return std::string(text.substr(byte_start, i - byte_start));
}

bool is_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        switch (cp) {
            case U'!': case U'"': case U'#': case U'%': case U'&': case U'\'':
            case U'(': case U')': case U'*': case U',': case U'-': case U'.':
            case U'/': case U':': case U';': case U'?': case U'@': case U'[':
            case U'\\': case U']': case U'_': case U'{': case U'}':
                return true;
            default:
                return false;
        }
    }
    switch (cp) {
        case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB: case 0xBF:
        case 0x30FB:
            return true;
        default:
            break;
    }
    if (cp >= 0x2010 && cp <= 0x2027) return true;
    if (cp >= 0x2030 && cp <= 0x205E) return true;
    if (cp >= 0x3001 && cp <= 0x3003) return true;
    if (cp >= 0x3008 && cp <= 0x3011) return true;
    if (cp >= 0x3014 && cp <= 0x301F) return true;
    if (cp >= 0xFF01 && cp <= 0xFF03) return true;
    if (cp >= 0xFF05 && cp <= 0xFF0A) return true;
    if (cp >= 0xFF0C && cp <= 0xFF0F) return true;
    if (cp == 0xFF1A || cp == 0xFF1B || cp == 0xFF1F || cp == 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF3D) return true;
    if (cp == 0xFF3F || cp == 0xFF5B || cp == 0xFF5D) return true;
    if (cp >= 0xFF5F && cp <= 0xFF65) return true;
    return false;
}

bool is_ascii_alpha(char32_t cp) {
    return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z');
}

char32_t to_lower_ascii(char32_t cp) {
    return (cp >= U'A' && cp <= U'Z') ? cp + 0x20 : cp;
}

} // namespace warrantscore::utf8
