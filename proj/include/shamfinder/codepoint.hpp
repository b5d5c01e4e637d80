#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace shamfinder {

using CodePoint = char32_t;

inline constexpr CodePoint kMaxCodePoint = 0x10FFFF;

constexpr bool is_scalar_value(CodePoint cp) {
  return cp <= kMaxCodePoint && (cp < 0xD800 || cp > 0xDFFF);
}

// `U+0041`, `U+1F600`: uppercase hex, at least four digits.
std::string format_codepoint(CodePoint cp);

// Accepts `U+XXXX`, `0xXXXX`, bare hex of length >= 2, or a single UTF-8
// character.
std::optional<CodePoint> parse_codepoint(std::string_view text);

// Hex digits only, 1-6 of them.
std::optional<CodePoint> parse_hex_codepoint(std::string_view hex);

}  // namespace shamfinder
