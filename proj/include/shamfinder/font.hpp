#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shamfinder/codepoint.hpp"

namespace shamfinder {

/// One glyph as stored in a GNU Unifont `.hex` line: 8x16 or 16x16 pixels,
/// row-major, one byte (0 or 1) per pixel.
struct RawGlyph {
  CodePoint codepoint = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  int black_count() const;
  bool operator==(const RawGlyph&) const = default;
};

/// A 32x32 binary image. Row r occupies bits [32*(r%2), 32*(r%2)+32) of
/// word r/2; column c is bit 31-c within its row, so the leftmost pixel is
/// the most significant bit of the row.
class GlyphBitmap32 {
public:
  static constexpr int kSide = 32;
  static constexpr int kWords = kSide * kSide / 64;
  using Words = std::array<std::uint64_t, kWords>;

  GlyphBitmap32() = default;
  explicit GlyphBitmap32(CodePoint cp) : codepoint_(cp) {}
  GlyphBitmap32(CodePoint cp, const Words& words);

  CodePoint codepoint() const { return codepoint_; }
  const Words& words() const { return words_; }
  int black_count() const { return black_count_; }

  bool pixel(int row, int col) const {
    const int shift = 32 * (row & 1) + (31 - col);
    return (words_[row >> 1] >> shift) & 1u;
  }
  void set_pixel(int row, int col, bool on);

  // Rows of `#`/`.`, one line per row.
  std::string render() const;

  bool operator==(const GlyphBitmap32& other) const {
    return codepoint_ == other.codepoint_ && words_ == other.words_;
  }

private:
  CodePoint codepoint_ = 0;
  Words words_{};
  int black_count_ = 0;
};

/// Parses `XXXX:HEXDATA`. Throws FontError carrying `line_no` on malformed
/// hex, an unsupported payload length, or an out-of-range code point.
RawGlyph parse_hex_line(std::string_view line, std::size_t line_no = 0);

/// Inverse of parse_hex_line, uppercase hex.
std::string encode_hex_line(const RawGlyph& raw);

/// Places the native pixels 1:1 in the 32x32 frame, centred both ways: an
/// 8x16 glyph lands at rows 8..23, columns 12..19; a 16x16 glyph at rows
/// 8..23, columns 8..23. Black count is preserved.
GlyphBitmap32 normalize_glyph(const RawGlyph& raw);

class GlyphSet {
public:
  const GlyphBitmap32* find(CodePoint cp) const {
    auto it = glyphs_.find(cp);
    return it == glyphs_.end() ? nullptr : &it->second;
  }
  bool contains(CodePoint cp) const { return glyphs_.contains(cp); }
  std::size_t size() const { return glyphs_.size(); }

  const std::string& source_digest() const { return source_digest_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  // Replaces any existing glyph for the same code point.
  bool insert(GlyphBitmap32 glyph);

  // Sorted code points.
  std::vector<CodePoint> codepoints() const;

  const std::unordered_map<CodePoint, GlyphBitmap32>& glyphs() const { return glyphs_; }

  void set_source_digest(std::string digest) { source_digest_ = std::move(digest); }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

private:
  std::unordered_map<CodePoint, GlyphBitmap32> glyphs_;
  std::string source_digest_;
  std::vector<std::string> warnings_;
};

/// Parses a whole `.hex` text. Blank lines and `#` comments are skipped.
/// Duplicate code points: last line wins, a warning is recorded.
GlyphSet parse_font(std::string_view text);

/// Throws Error on an unreadable file, FontError on a bad line or when no
/// glyph was parsed.
GlyphSet load_font(const std::filesystem::path& path);

}  // namespace shamfinder
