#pragma once

#include <cstddef>
#include <string>
#include <string_view>

// Character offsets throughout the library count Unicode scalar values.
// These helpers convert between UTF-8 storage and scalar-value indexing.
namespace sublink::utf8 {

// Throws Error(parse) on malformed input.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

// Number of scalar values in a UTF-8 string.
std::size_t length(std::string_view text);

// Substring by scalar-value offsets [start, end).
std::string slice(std::string_view text, std::size_t start, std::size_t end);

bool is_space(char32_t cp);
bool is_default_punctuation(char32_t cp);

// ASCII-only lowercasing; non-ASCII scalars pass through.
std::string ascii_lower(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace sublink::utf8
