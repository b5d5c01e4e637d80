#pragma once

#include <bit>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "shamfinder/font.hpp"
#include "shamfinder/tables.hpp"

namespace shamfinder {

struct DeltaParams {
  int theta = 4;
  int sparse_min_black = 10;
  static constexpr int kImageSide = GlyphBitmap32::kSide;

  // Throws ConfigError on negative thresholds.
  void validate() const;
};

struct PairScore {
  CodePoint a = 0;
  CodePoint b = 0;
  int delta = 0;
  double mse = 0.0;
  double psnr = std::numeric_limits<double>::infinity();
};

/// Number of differing pixels.
inline int delta(const GlyphBitmap32& x, const GlyphBitmap32& y) {
  int d = 0;
  const auto& wx = x.words();
  const auto& wy = y.words();
  for (int i = 0; i < GlyphBitmap32::kWords; ++i) d += std::popcount(wx[i] ^ wy[i]);
  return d;
}

PairScore score_pair(const GlyphBitmap32& x, const GlyphBitmap32& y,
                     const DeltaParams& params = {});

inline bool is_sparse(const GlyphBitmap32& g, const DeltaParams& params = {}) {
  return g.black_count() < params.sparse_min_black;
}

struct BuildReport {
  std::size_t working_set = 0;
  std::size_t sparse = 0;
  std::size_t candidate_pairs = 0;  // Δ ≤ θ before sparse elimination
  std::size_t comparisons = 0;
  double seconds_images = 0.0;
  double seconds_delta = 0.0;
  double seconds_sparse = 0.0;
  std::vector<CodePoint> sparse_codepoints;
};

/// Code points that are PVALID and have a glyph, ascending.
std::vector<CodePoint> working_set(const GlyphSet& glyphs, const CodePointSet& pvalid);

/// Every unordered pair of the working set with Δ ≤ θ and neither glyph
/// sparse. `workers` = 0 uses the hardware concurrency. Throws Error when
/// the working set is empty.
HomoglyphDB build_simchar(const GlyphSet& glyphs, const CodePointSet& pvalid,
                          const DeltaParams& params = {}, unsigned workers = 1,
                          BuildReport* report = nullptr);

struct DbReadReport {
  std::vector<std::string> warnings;
};

/// Versioned text format, see README. Pairs are written in (a, b) order.
std::string serialize_db_text(const HomoglyphDB& db);
void serialize_db(const HomoglyphDB& db, const std::filesystem::path& path);

/// Throws DbFormatError on a bad header version, malformed or truncated
/// content. When `expected` digests are given and differ from the file's,
/// a warning is added to `report`.
HomoglyphDB deserialize_db_text(std::string_view text, const DbMetadata* expected = nullptr,
                                DbReadReport* report = nullptr);
HomoglyphDB deserialize_db(const std::filesystem::path& path, const DbMetadata* expected = nullptr,
                           DbReadReport* report = nullptr);

}  // namespace shamfinder
