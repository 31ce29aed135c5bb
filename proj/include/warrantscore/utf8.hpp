#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

// Minimal UTF-8 helpers. Spans in this project are half-open intervals over
// Unicode scalar values, so every span operation goes through these instead
// of byte indexing. Invalid sequences decode to U+FFFD, one replacement per
// offending byte.
namespace warrantscore::utf8 {

std::u32string decode(std::string_view text);
std::string encode(std::u32string_view text);

// Number of Unicode scalar values in `text`.
std::size_t length(std::string_view text);

// Code-point slice [pos, pos + n). Clamps to the end of the string.
std::string substr(std::string_view text, std::size_t pos, std::size_t n);

bool is_space(char32_t cp);

// Principal Unicode punctuation (category P) ranges; symbols (S) excluded.
bool is_punct(char32_t cp);

bool is_ascii_alpha(char32_t cp);
char32_t to_lower_ascii(char32_t cp);

} // namespace warrantscore::utf8
