#include "shamfinder/codepoint.hpp"

#include <charconv>
#include <cstdio>

#include "shamfinder/utf8.hpp"

namespace shamfinder {

std::string format_codepoint(CodePoint cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

std::optional<CodePoint> parse_hex_codepoint(std::string_view hex) {
  if (hex.empty() || hex.size() > 6) return std::nullopt;
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
  if (ec != std::errc{} || ptr != hex.data() + hex.size()) return std::nullopt;
  if (!is_scalar_value(value)) return std::nullopt;
  return static_cast<CodePoint>(value);
}

std::optional<CodePoint> parse_codepoint(std::string_view text) {
  if (text.size() > 2 && (text[0] == 'U' || text[0] == 'u') && text[1] == '+')
    return parse_hex_codepoint(text.substr(2));
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    return parse_hex_codepoint(text.substr(2));
  try {
    auto decoded = utf8::decode(text);
    if (decoded.size() == 1) return decoded[0];
  } catch (const std::exception&) {
  }
  if (text.size() >= 2) return parse_hex_codepoint(text);
  return std::nullopt;
}

}  // namespace shamfinder
