#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "shamfinder/codepoint.hpp"

namespace shamfinder {

/// Sorted, duplicate-free set of scalar values.
class CodePointSet {
public:
  CodePointSet() = default;
  CodePointSet(std::vector<CodePoint> points, std::string label = {}, std::string digest = {});

  bool contains(CodePoint cp) const;
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  std::span<const CodePoint> points() const { return points_; }

  const std::string& label() const { return label_; }
  const std::string& digest() const { return digest_; }

  bool operator==(const CodePointSet& other) const { return points_ == other.points_; }

private:
  std::vector<CodePoint> points_;
  std::string label_;
  std::string digest_;
};

struct TableLoadReport {
  std::size_t lines = 0;
  std::size_t skipped = 0;
  std::vector<std::string> warnings;
};

/// Parses the IDNA derived-property layout
/// `XXXX[..YYYY] ; PROPERTY [# comment]` and keeps PVALID entries only.
/// Unparseable lines are skipped and counted; a reversed range throws
/// TableError.
CodePointSet parse_pvalid(std::string_view text, TableLoadReport* report = nullptr);
CodePointSet load_pvalid(const std::filesystem::path& path, TableLoadReport* report = nullptr);

enum class PairSource : std::uint8_t { UC = 1, SimChar = 2, Both = 3 };

constexpr PairSource operator|(PairSource a, PairSource b) {
  return static_cast<PairSource>(static_cast<std::uint8_t>(a) | static_cast<std::uint8_t>(b));
}
constexpr bool has_source(PairSource s, PairSource flag) {
  return (static_cast<std::uint8_t>(s) & static_cast<std::uint8_t>(flag)) != 0;
}

std::string_view to_string(PairSource s);  // "UC", "SIMCHAR", "BOTH"
std::optional<PairSource> parse_pair_source(std::string_view text);

/// Unordered confusable pair stored as (min, max).
struct ConfusablePair {
  CodePoint a = 0;
  CodePoint b = 0;
  PairSource source = PairSource::UC;
  std::optional<int> delta;  // present whenever the SimChar flag is set

  bool operator==(const ConfusablePair&) const = default;
};

struct DbMetadata {
  std::string font_digest;
  std::string pvalid_digest;
  std::string confusables_digest;
  std::optional<int> theta;
  std::optional<int> sparse_min_black;

  bool operator==(const DbMetadata&) const = default;
};

/// Canonical pair set with a symmetric adjacency index.
class HomoglyphDB {
public:
  HomoglyphDB() = default;

  /// Canonicalizes orientation, drops a == b, and unions duplicate pairs
  /// (source flags OR-ed, SimChar delta kept). Throws Error if a SimChar
  /// pair has no delta.
  HomoglyphDB(std::vector<ConfusablePair> pairs, DbMetadata meta);

  std::span<const ConfusablePair> pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  const DbMetadata& metadata() const { return meta_; }
  DbMetadata& metadata() { return meta_; }

  const ConfusablePair* find(CodePoint x, CodePoint y) const;
  bool contains(CodePoint x, CodePoint y) const { return find(x, y) != nullptr; }

  /// Partners of `cp`, ascending.
  std::span<const CodePoint> partners(CodePoint cp) const;

  /// Every code point that appears in some pair, ascending.
  std::vector<CodePoint> characters() const;

  /// Rebuilds the adjacency index from scratch and compares it with the
  /// live one.
  bool index_consistent() const;

  bool operator==(const HomoglyphDB& other) const {
    return pairs_ == other.pairs_ && meta_ == other.meta_;
  }

private:
  static std::uint64_t key(CodePoint lo, CodePoint hi) {
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
  }
  void build_index();

  std::vector<ConfusablePair> pairs_;
  DbMetadata meta_;
  std::unordered_map<std::uint64_t, std::uint32_t> by_key_;
  std::unordered_map<CodePoint, std::vector<CodePoint>> adjacency_;
};

/// Entries `source ; target ; type # comment` whose target is a single code
/// point, with both ends PVALID. Throws TableError when nothing survives.
HomoglyphDB parse_confusables(std::string_view text, const CodePointSet& pvalid,
                              TableLoadReport* report = nullptr);
HomoglyphDB load_confusables(const std::filesystem::path& path, const CodePointSet& pvalid,
                             TableLoadReport* report = nullptr);

/// Pair-set union. Throws Error when both sides name different PVALID
/// digests; an empty digest is compatible with anything.
HomoglyphDB merge(const HomoglyphDB& lhs, const HomoglyphDB& rhs);

}  // namespace shamfinder
