#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"
#include "shamfinder/font.hpp"

using namespace shamfinder;

namespace {

int count_bits(const RawGlyph& g) {
  int n = 0;
  for (auto b : g.bits) n += b ? 1 : 0;
  return n;
}

std::string upper(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

TEST_CASE("parse_hex_line: 8x16 Latin capital A") {
  // Copied verbatim from the shipped font file.
  const auto g = parse_hex_line("0041:0000000018242442427E424242420000");
  CHECK(g.codepoint == U'A');
  CHECK(g.width == 8);
  CHECK(g.height == 16);
  CHECK(g.bits.size() == 8u * 16u);
  // 18 24 24 42 42 7E 42 42 42 42 -> 2+2+2+2+2+6+2+2+2+2
  CHECK(g.black_count() == 24);
  CHECK(count_bits(g) == 24);
  // row 9 is 0x7E: columns 1..6 set
  for (int c = 0; c < 8; ++c) CHECK(static_cast<bool>(g.bits[9 * 8 + c]) == (c >= 1 && c <= 6));
}

TEST_CASE("parse_hex_line: 16x16 glyph") {
  const auto g = parse_hex_line("4E00:0000000000000000000000000000FFFE00000000000000000000000000000000");
  CHECK(g.codepoint == 0x4E00);
  CHECK(g.width == 16);
  CHECK(g.height == 16);
  CHECK(g.black_count() == 15);
}

TEST_CASE("parse_hex_line: lowercase hex and 6-digit code points") {
  const auto g = parse_hex_line("1f600:0000000018242442427e424242420000");
  CHECK(g.codepoint == 0x1F600);
  CHECK(encode_hex_line(g) == "1F600:0000000018242442427E424242420000");
}

TEST_CASE("parse_hex_line: malformed lines") {
  CHECK_THROWS_AS(parse_hex_line("0041"), FontError);
  CHECK_THROWS_AS(parse_hex_line("41:0000000018242442427E424242420000"), FontError);
  CHECK_THROWS_AS(parse_hex_line("0041:00000000182424"), FontError);
  CHECK_THROWS_AS(parse_hex_line("0041:000000001824244242ZZ424242420000"), FontError);
  CHECK_THROWS_AS(parse_hex_line("110000:0000000018242442427E424242420000"), FontError);
  CHECK_THROWS_AS(parse_hex_line("D800:0000000018242442427E424242420000"), FontError);
  try {
    parse_hex_line("0041:XYZ", 17);
    FAIL("expected FontError");
  } catch (const FontError& e) {
    CHECK(e.line() == 17);
  }
}

TEST_CASE("normalize_glyph: 8-wide glyph is centred 1:1") {
  const auto raw = parse_hex_line("0041:0000000018242442427E424242420000");
  const auto g = normalize_glyph(raw);
  CHECK(g.codepoint() == U'A');
  CHECK(g.black_count() == raw.black_count());
  for (int r = 0; r < 32; ++r)
    for (int c = 0; c < 32; ++c) {
      const bool inside = r >= 8 && r < 24 && c >= 12 && c < 20;
      const bool want = inside && raw.bits[static_cast<std::size_t>((r - 8) * 8 + (c - 12))];
      REQUIRE(g.pixel(r, c) == want);
    }
}

TEST_CASE("normalize_glyph: 16-wide glyph lands at row/col offset 8") {
  const auto g = normalize_glyph(parse_hex_line("4E00:0000000000000000000000000000FFFE00000000000000000000000000000000"));
  CHECK(g.black_count() == 15);
  for (int c = 0; c < 32; ++c) CHECK(g.pixel(15, c) == (c >= 8 && c <= 22));
}

TEST_CASE("normalize_glyph: blank glyph") {
  const auto g = normalize_glyph(parse_hex_line("0020:00000000000000000000000000000000"));
  CHECK(g.black_count() == 0);
  CHECK(g.words() == GlyphBitmap32::Words{});
}

TEST_CASE("GlyphBitmap32: set_pixel keeps the count and render is 32 rows") {
  GlyphBitmap32 g(1);
  g.set_pixel(0, 0, true);
  g.set_pixel(31, 31, true);
  g.set_pixel(31, 31, true);
  CHECK(g.black_count() == 2);
  g.set_pixel(0, 0, false);
  CHECK(g.black_count() == 1);
  CHECK(!g.pixel(0, 0));
  CHECK(g.pixel(31, 31));
  const auto art = g.render();
  CHECK(std::count(art.begin(), art.end(), '\n') == 32);
  CHECK(std::count(art.begin(), art.end(), '#') == 1);
  CHECK(art.size() == 33u * 32u);
}

TEST_CASE("parse_font: comments, blanks, bad lines and duplicates") {
  const std::string text =
      "# header comment\n"
      "\n"
      "0041:0000000018242442427E424242420000\n"
      "garbage\n"
      "0042:00000000000000000000000000000000\n"
      "0042:0000000018242442427E424242420000\r\n";
  const auto set = parse_font(text);
  CHECK(set.size() == 2);
  CHECK(set.warnings().size() == 2);  // one skipped line, one duplicate
  // last wins
  REQUIRE(set.find(U'B') != nullptr);
  CHECK(set.find(U'B')->black_count() == 24);
  CHECK(set.codepoints() == std::vector<CodePoint>{U'A', U'B'});
  CHECK(set.find(U'C') == nullptr);
  CHECK(!set.contains(U'C'));
}

TEST_CASE("load_font: zero glyphs and one glyph") {
  const auto dir = std::filesystem::temp_directory_path() / "shamfinder_font_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "empty.hex");
    std::ofstream(dir / "one.hex") << "0041:0000000018242442427E424242420000\n";
  }
  try {
    load_font(dir / "empty.hex");
    FAIL("expected an error");
  } catch (const FontError& e) {
    CHECK(std::string(e.what()).find("zero glyphs") != std::string::npos);
  }
  const auto one = load_font(dir / "one.hex");
  CHECK(one.size() == 1);
  CHECK(one.source_digest() == sha256_hex(read_file(dir / "one.hex")));
  CHECK(one.source_digest().size() == 64);
  CHECK_THROWS_AS(load_font(dir / "missing.hex"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("real font: every line round trips and normalization preserves the count") {
  std::ifstream in(oracle::data_path("unifont-14.0.01.hex"));
  REQUIRE(in);
  std::string line;
  std::size_t lines = 0;
  std::size_t bad = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    ++lines;
    const auto raw = parse_hex_line(line);
    if (encode_hex_line(raw) != upper(line)) ++bad;
    const auto g = normalize_glyph(raw);
    if (g.black_count() != raw.black_count() || g.black_count() != count_bits(raw)) ++bad;
  }
  CHECK(lines == 70369);
  CHECK(bad == 0);
}

TEST_CASE("real font: lookup is total over parsed code points") {
  const auto& font = oracle::real_font();
  CHECK(font.size() == 70369);
  CHECK(font.warnings().empty());
  for (CodePoint cp : font.codepoints()) REQUIRE(font.find(cp) != nullptr);
  CHECK(font.find(0x10FFFF) == nullptr);
  CHECK(font.find(0xD800) == nullptr);
}
