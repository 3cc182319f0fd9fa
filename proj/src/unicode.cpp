#include "entroscale/unicode.hpp"

#include <array>

namespace entroscale {

namespace {

// Windows-1252 mappings for bytes 0x80..0x9F; the five unassigned slots keep
// their byte value so every byte maps to exactly one code point.
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0x0081, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0x008D, 0x017D, 0x008F,
    0x0090, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0x009D, 0x017E, 0x0178,
};

}  // namespace

Text decode_utf8(std::string_view bytes) {
    Text out;
    out.reserve(bytes.size());
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        char32_t cp = 0;
        std::size_t extra = 0;
        char32_t min_cp = 0;
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            extra = 1;
            min_cp = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            extra = 2;
            min_cp = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            extra = 3;
            min_cp = 0x10000;
        } else {
            throw DecodeError("invalid UTF-8 lead byte at offset " + std::to_string(i));
        }
        if (i + extra >= n) {
            throw DecodeError("truncated UTF-8 sequence at offset " + std::to_string(i));
        }
        for (std::size_t k = 1; k <= extra; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) {
                throw DecodeError("invalid UTF-8 continuation at offset " + std::to_string(i + k));
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (cp < min_cp) {
            throw DecodeError("overlong UTF-8 encoding at offset " + std::to_string(i));
        }
        if (cp >= 0xD800 && cp <= 0xDFFF) {
            throw DecodeError("UTF-8 encoded surrogate at offset " + std::to_string(i));
        }
        if (cp > 0x10FFFF) {
            throw DecodeError("code point out of range at offset " + std::to_string(i));
        }
        out.push_back(cp);
        i += extra + 1;
    }
    return out;
}

std::string encode_utf8(char32_t cp) {
    std::string out;
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
    return out;
}

std::string encode_utf8(TextView text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) out += encode_utf8(cp);
    return out;
}

Text decode_byte_mapped(std::string_view bytes) {
    Text out;
    out.reserve(bytes.size());
    for (char c : bytes) {
        const auto b = static_cast<unsigned char>(c);
        if (b >= 0x80 && b < 0xA0) {
            out.push_back(kCp1252High[b - 0x80]);
        } else {
            out.push_back(b);
        }
    }
    return out;
}

std::string encode_byte_mapped(TextView text) {
    std::string out;
    out.reserve(text.size());
    for (char32_t cp : text) {
        if (cp < 0x80 || (cp >= 0xA0 && cp <= 0xFF)) {
            out.push_back(static_cast<char>(cp));
            continue;
        }
        bool found = false;
        for (std::size_t k = 0; k < kCp1252High.size(); ++k) {
            if (kCp1252High[k] == cp) {
                out.push_back(static_cast<char>(0x80 + k));
                found = true;
                break;
            }
        }
        if (!found) {
            throw DomainError("code point U+" + std::to_string(static_cast<std::uint32_t>(cp)) +
                              " has no byte-mapped representation");
        }
    }
    return out;
}

bool is_space_cp(char32_t c) {
    switch (c) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0:
        case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F:
        case 0x3000:
            return true;
        default:
            return c >= 0x2000 && c <= 0x200A;
    }
}

bool is_word_punct_cp(char32_t c) {
    switch (c) {
        case U'.': case U',': case U';': case U':': case U'!': case U'?':
        case U'(': case U')': case U'[': case U']': case U'{': case U'}':
        case U'"': case U'\'':
        case 0xAB: case 0xBB:   // « »
        case 0xBF: case 0xA1:   // ¿ ¡
        case 0x2014:            // em dash
        case U'-':
            return true;
        default:
            return false;
    }
}

char32_t to_lower_cp(char32_t c) {
    if (c >= U'A' && c <= U'Z') return c + 0x20;
    // Latin-1 uppercase block, skipping the multiplication sign.
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    switch (c) {
        case 0x152: return 0x153;  // Œ
        case 0x160: return 0x161;  // Š
        case 0x178: return 0xFF;   // Ÿ
        case 0x17D: return 0x17E;  // Ž
        default: return c;
    }
}

bool is_upper_cp(char32_t c) { return to_lower_cp(c) != c; }

}  // namespace entroscale
