#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shamfinder/ingest.hpp"
#include "shamfinder/tables.hpp"

namespace shamfinder {

struct Diff {
  std::size_t pos = 0;  // 0-based scalar index
  CodePoint ref_cp = 0;
  CodePoint idn_cp = 0;
  PairSource source = PairSource::UC;
  std::optional<int> delta;

  bool operator==(const Diff&) const = default;
};

struct HomographMatch {
  std::string reference;
  std::size_t reference_rank = 0;
  const DomainName* idn = nullptr;  // points into the scanned corpus
  std::vector<Diff> diffs;
};

/// Equal length, every position equal or a DB pair, at least one pair.
std::optional<std::vector<Diff>> is_homograph(std::u32string_view reference,
                                              std::u32string_view candidate,
                                              const HomoglyphDB& db);

struct DetectReport {
  std::size_t references = 0;
  std::size_t idns_scanned = 0;
  std::size_t undecodable = 0;
  std::size_t comparisons = 0;
  double seconds = 0.0;

  double seconds_per_reference() const {
    return references ? seconds / static_cast<double>(references) : 0.0;
  }
};

/// All (reference, IDN) matches, ordered by reference rank then IDN ASCII
/// form. `workers` = 0 uses the hardware concurrency.
std::vector<HomographMatch> detect(const ReferenceSet& refs, const DomainCorpus& corpus,
                                   const HomoglyphDB& db, unsigned workers = 1,
                                   DetectReport* report = nullptr);

struct Substitution {
  std::size_t pos = 0;
  CodePoint from = 0;
  CodePoint to = 0;
  std::optional<int> delta;
};

struct RevertCandidate {
  std::string original;
  int substitutions = 0;
  int total_delta = 0;
  std::vector<Substitution> details;
};

struct RevertResult {
  std::vector<RevertCandidate> candidates;
  bool truncated = false;
};

/// LDH targets for reversion: a-z, 0-9 and hyphen.
constexpr bool is_latin_target(CodePoint cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'0' && cp <= U'9') || cp == U'-';
}

/// Replaces each non-ASCII scalar by a Basic Latin DB partner. Candidates
/// come out in ascending (substitutions, total Δ, text); at most `cap` are
/// returned and `truncated` says whether more existed.
RevertResult revert(std::u32string_view label, const HomoglyphDB& db, std::size_t cap = 1000);

}  // namespace shamfinder
