#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "entroscale/errors.hpp"

namespace entroscale {

using Text = std::u32string;
using TextView = std::u32string_view;

// Strict UTF-8 decode: rejects overlong forms, surrogates, code points past
// U+10FFFF, truncated sequences and stray continuation bytes.
Text decode_utf8(std::string_view bytes);
std::string encode_utf8(TextView text);
std::string encode_utf8(char32_t cp);

// Single-byte decode used for opaque binary inputs: the Windows-1252 table,
// with the five unassigned bytes (0x81 0x8D 0x8F 0x90 0x9D) passing through
// as their own code point values. Bijective on 0x00..0xFF.
Text decode_byte_mapped(std::string_view bytes);
// Inverse of decode_byte_mapped; throws DomainError on unmappable code points.
std::string encode_byte_mapped(TextView text);

bool is_space_cp(char32_t c);
// Punctuation emitted as one-character tokens at the word scale.
bool is_word_punct_cp(char32_t c);
char32_t to_lower_cp(char32_t c);
bool is_upper_cp(char32_t c);

}  // namespace entroscale
