#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shamfinder/punycode.hpp"

namespace shamfinder {

enum class CorpusFormat { Plain, Zone };

struct CorpusFileStats {
  std::string path;
  std::size_t lines = 0;
  std::size_t domains = 0;  // after TLD filter, before cross-file dedup
  std::size_t idns = 0;
};

struct DomainCorpus {
  std::vector<DomainName> all;    // unique by ascii_form, sorted
  std::vector<std::size_t> idns;  // indices into `all`
  std::vector<CorpusFileStats> files;
  std::size_t undecodable = 0;    // IDNs whose labels failed to decode

  std::size_t size() const { return all.size(); }
};

struct CorpusOptions {
  std::optional<std::string> tld;  // without the leading dot
  CorpusFormat format = CorpusFormat::Plain;
  unsigned workers = 1;
};

/// Extracts owner names from one input text. Zone mode keeps the owner of
/// NS records, honouring `$ORIGIN` and blank-owner continuation lines.
std::vector<std::string> extract_domains(std::string_view text, CorpusFormat format);

/// Builds a corpus from in-memory texts (one per source).
DomainCorpus build_corpus(const std::vector<std::pair<std::string, std::string>>& sources,
                          const CorpusOptions& options = {});

/// Throws Error on an unreadable file or when no domain survives.
DomainCorpus load_corpus(const std::vector<std::filesystem::path>& paths,
                         const CorpusOptions& options = {});

struct Reference {
  std::u32string label;  // TLD stripped, lowercased
  std::string text;      // UTF-8 of `label`
  std::size_t rank = 0;  // 1-based
};

class ReferenceSet {
public:
  ReferenceSet() = default;
  explicit ReferenceSet(std::vector<Reference> entries);

  const std::vector<Reference>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Indices of references of the given scalar length.
  const std::vector<std::size_t>& with_length(std::size_t len) const;
  const std::map<std::size_t, std::vector<std::size_t>>& length_index() const { return by_length_; }

private:
  std::vector<Reference> entries_;
  std::map<std::size_t, std::vector<std::size_t>> by_length_;
};

struct ReferenceLoadReport {
  std::vector<std::string> warnings;
};

/// Accepts a plain list or `rank,domain` CSV. Keeps the first `top_k`
/// distinct labels under `tld`; a shortfall is reported as a warning.
ReferenceSet parse_references(std::string_view text, std::size_t top_k, std::string_view tld,
                              ReferenceLoadReport* report = nullptr);
ReferenceSet load_references(const std::filesystem::path& path, std::size_t top_k,
                             std::string_view tld, ReferenceLoadReport* report = nullptr);

}  // namespace shamfinder
