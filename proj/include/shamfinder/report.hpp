#pragma once

#include <string>
#include <vector>

#include "shamfinder/detector.hpp"

namespace shamfinder::report {

/// Column names of the match TSV; every record has exactly this many
/// fields.
const std::vector<std::string>& tsv_columns();

/// reference, rank, idn_ascii, idn_unicode, diff count, diffs, highlight.
/// Diffs are `pos:U+REF:U+IDN:delta:SOURCE` joined by `,`; delta is `-`
/// for UC-only pairs.
std::string tsv_record(const HomographMatch& m);

/// One JSON object, no trailing newline. Keys: reference, rank, idn_ascii,
/// idn_unicode, diffs[] {pos, ref_cp, idn_cp, delta, source}.
std::string json_record(const HomographMatch& m);

/// Parsed form of a JSON-lines record.
struct MatchRecord {
  std::string reference;
  std::size_t rank = 0;
  std::string idn_ascii;
  std::string idn_unicode;
  std::vector<Diff> diffs;

  bool operator==(const MatchRecord&) const = default;
};

MatchRecord to_record(const HomographMatch& m);
MatchRecord parse_json_record(const std::string& line);

/// The IDN label with every differing character shown as `[idn→ref]`.
std::string highlight(const HomographMatch& m);

}  // namespace shamfinder::report
