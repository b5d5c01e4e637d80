#pragma once
// Independent reference implementations and generators, test-only.

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "shamfinder/detector.hpp"
#include "shamfinder/font.hpp"
#include "shamfinder/ingest.hpp"
#include "shamfinder/punycode.hpp"
#include "shamfinder/tables.hpp"
#include "shamfinder/utf8.hpp"

#ifndef SHAMFINDER_DATA_DIR
#error "SHAMFINDER_DATA_DIR must be defined"
#endif

namespace oracle {

inline const std::string kDataDir = SHAMFINDER_DATA_DIR;
inline std::string data_path(const std::string& name) { return kDataDir + "/" + name; }

// Shared real-data fixtures, loaded once per test binary.
inline const shamfinder::GlyphSet& real_font() {
  static const auto font = shamfinder::load_font(data_path("unifont-14.0.01.hex"));
  return font;
}
inline const shamfinder::CodePointSet& real_pvalid() {
  static const auto pvalid = shamfinder::load_pvalid(data_path("idna-pvalid-12.1.0.txt"));
  return pvalid;
}
inline const shamfinder::HomoglyphDB& real_uc() {
  static const auto uc = shamfinder::load_confusables(data_path("confusables.txt"), real_pvalid());
  return uc;
}

// Per-pixel double loop over the 32x32 grid.
inline int naive_delta(const shamfinder::GlyphBitmap32& a, const shamfinder::GlyphBitmap32& b) {
  int d = 0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) d += a.pixel(i, j) != b.pixel(i, j) ? 1 : 0;
  return d;
}

inline shamfinder::GlyphBitmap32 random_bitmap(std::mt19937_64& rng, double density, char32_t cp = 0) {
  std::bernoulli_distribution on(density);
  shamfinder::GlyphBitmap32 g(cp);
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      if (on(rng)) g.set_pixel(i, j, true);
  return g;
}

// (reference text, idn ascii form) for every match; no buckets, no index.
using MatchKey = std::pair<std::string, std::string>;

inline std::set<MatchKey> naive_detect(const shamfinder::ReferenceSet& refs, const shamfinder::DomainCorpus& corpus,
                                       const shamfinder::HomoglyphDB& db) {
  std::set<std::pair<char32_t, char32_t>> pairs;
  for (const auto& p : db.pairs()) {
    pairs.emplace(p.a, p.b);
    pairs.emplace(p.b, p.a);
  }
  std::vector<std::pair<std::u32string, const shamfinder::DomainName*>> idns;
  for (std::size_t idx : corpus.idns)
    if (!corpus.all[idx].error) idns.emplace_back(corpus.all[idx].second_level(), &corpus.all[idx]);
  std::set<MatchKey> out;
  for (const auto& r : refs.entries()) {
    for (const auto& [x, d] : idns) {
      if (x.size() != r.label.size()) continue;
      bool ok = true;
      bool differs = false;
      for (std::size_t i = 0; i < x.size() && ok; ++i) {
        if (x[i] == r.label[i]) continue;
        differs = true;
        ok = pairs.contains({r.label[i], x[i]});
      }
      if (ok && differs) out.emplace(r.text, d->ascii_form);
    }
  }
  return out;
}

inline std::set<MatchKey> keys(const std::vector<shamfinder::HomographMatch>& matches) {
  std::set<MatchKey> out;
  for (const auto& m : matches) out.emplace(m.reference, m.idn->ascii_form);
  return out;
}

inline std::string random_ascii_label(std::mt19937_64& rng, std::size_t len) {
  static constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
  std::uniform_int_distribution<int> pick(0, 35);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(kAlphabet[pick(rng)]);
  return s;
}

// Replaces 1..max_subs positions of `label` with DB partners. Returns the
// substituted label and the positions touched, or nothing if no position
// has a partner satisfying `accept`.
template <class Accept>
std::optional<std::u32string> substitute(std::mt19937_64& rng, const std::u32string& label,
                                         const shamfinder::HomoglyphDB& db, int max_subs, Accept accept) {
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < label.size(); ++i) {
    for (char32_t p : db.partners(label[i]))
      if (accept(label[i], p)) {
        eligible.push_back(i);
        break;
      }
  }
  if (eligible.empty()) return std::nullopt;
  std::shuffle(eligible.begin(), eligible.end(), rng);
  std::uniform_int_distribution<int> how_many(1, std::min<int>(max_subs, static_cast<int>(eligible.size())));
  const int n = how_many(rng);
  std::u32string out = label;
  for (int k = 0; k < n; ++k) {
    const std::size_t pos = eligible[static_cast<std::size_t>(k)];
    std::vector<char32_t> options;
    for (char32_t p : db.partners(label[pos]))
      if (accept(label[pos], p)) options.push_back(p);
    std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
    out[pos] = options[pick(rng)];
  }
  return out;
}

// xn-- form of a Unicode label, or the label itself when ASCII.
inline std::string ace(const std::u32string& label) {
  for (char32_t c : label)
    if (c >= 0x80) return std::string(shamfinder::kAcePrefix) + shamfinder::punycode::encode(label);
  return shamfinder::utf8::encode(label);
}

}  // namespace oracle
