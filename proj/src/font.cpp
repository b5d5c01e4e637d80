#include "shamfinder/font.hpp"

#include <algorithm>

#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"

namespace shamfinder {

namespace {

constexpr int kGlyphHeight = 16;

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

int RawGlyph::black_count() const {
  return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

GlyphBitmap32::GlyphBitmap32(CodePoint cp, const Words& words) : codepoint_(cp), words_(words) {
  for (auto w : words_) black_count_ += std::popcount(w);
}

void GlyphBitmap32::set_pixel(int row, int col, bool on) {
  const int shift = 32 * (row & 1) + (31 - col);
  const std::uint64_t mask = std::uint64_t{1} << shift;
  auto& w = words_[row >> 1];
  const bool was = (w & mask) != 0;
  if (was == on) return;
  w ^= mask;
  black_count_ += on ? 1 : -1;
}

std::string GlyphBitmap32::render() const {
  std::string out;
  out.reserve(kSide * (kSide + 1));
  for (int r = 0; r < kSide; ++r) {
    for (int c = 0; c < kSide; ++c) out.push_back(pixel(r, c) ? '#' : '.');
    out.push_back('\n');
  }
  return out;
}

RawGlyph parse_hex_line(std::string_view line, std::size_t line_no) {
  line = trim(line);
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) throw FontError("missing ':' separator", line_no);

  const auto cp_text = line.substr(0, colon);
  if (cp_text.size() < 4 || cp_text.size() > 6)
    throw FontError("code point must have 4-6 hex digits", line_no);
  std::uint32_t cp = 0;
  for (char c : cp_text) {
    const int v = hex_value(c);
    if (v < 0) throw FontError("malformed hex in code point", line_no);
    cp = cp * 16 + static_cast<std::uint32_t>(v);
  }
  if (!is_scalar_value(cp)) throw FontError("code point out of Unicode range", line_no);

  const auto data = line.substr(colon + 1);
  int width;
  if (data.size() == 32)
    width = 8;
  else if (data.size() == 64)
    width = 16;
  else
    throw FontError("unsupported glyph data length " + std::to_string(data.size()), line_no);

  RawGlyph raw{static_cast<CodePoint>(cp), width, kGlyphHeight, {}};
  raw.bits.reserve(static_cast<std::size_t>(width * kGlyphHeight));
  for (char c : data) {
    const int v = hex_value(c);
    if (v < 0) throw FontError("malformed hex in glyph data", line_no);
    for (int bit = 3; bit >= 0; --bit) raw.bits.push_back(static_cast<std::uint8_t>((v >> bit) & 1));
  }
  return raw;
}

std::string encode_hex_line(const RawGlyph& raw) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out = format_codepoint(raw.codepoint).substr(2);
  out.push_back(':');
  for (std::size_t i = 0; i + 3 < raw.bits.size(); i += 4) {
    const int v = raw.bits[i] << 3 | raw.bits[i + 1] << 2 | raw.bits[i + 2] << 1 | raw.bits[i + 3];
    out.push_back(kHex[v]);
  }
  return out;
}

GlyphBitmap32 normalize_glyph(const RawGlyph& raw) {
  constexpr int side = GlyphBitmap32::kSide;
  const int row0 = (side - raw.height) / 2;
  const int col0 = (side - raw.width) / 2;
  GlyphBitmap32 out(raw.codepoint);
  for (int r = 0; r < raw.height; ++r)
    for (int c = 0; c < raw.width; ++c)
      if (raw.bits[static_cast<std::size_t>(r * raw.width + c)]) out.set_pixel(row0 + r, col0 + c, true);
  return out;
}

bool GlyphSet::insert(GlyphBitmap32 glyph) {
  const CodePoint cp = glyph.codepoint();
  auto [it, inserted] = glyphs_.insert_or_assign(cp, std::move(glyph));
  return inserted;
}

std::vector<CodePoint> GlyphSet::codepoints() const {
  std::vector<CodePoint> out;
  out.reserve(glyphs_.size());
  for (const auto& [cp, g] : glyphs_) out.push_back(cp);
  std::sort(out.begin(), out.end());
  return out;
}

GlyphSet parse_font(std::string_view text) {
  GlyphSet set;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const auto line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    try {
      auto glyph = normalize_glyph(parse_hex_line(line, line_no));
      const CodePoint cp = glyph.codepoint();
      if (!set.insert(std::move(glyph)))
        set.add_warning("line " + std::to_string(line_no) + ": duplicate " + format_codepoint(cp) +
                        ", last definition wins");
    } catch (const FontError& e) {
      set.add_warning(std::string("skipped ") + e.what());
    }
  }
  return set;
}

GlyphSet load_font(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  GlyphSet set = parse_font(text);
  if (set.size() == 0) throw FontError("zero glyphs parsed from " + path.string());
  set.set_source_digest(sha256_hex(text));
  return set;
}

}  // namespace shamfinder
