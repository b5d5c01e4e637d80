#include "shamfinder/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <future>
#include <limits>
#include <unordered_set>

#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"
#include "shamfinder/utf8.hpp"

namespace shamfinder {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    f(text.substr(pos, eol - pos));
    pos = eol + 1;
  }
}

bool iequals(std::string_view a, std::string_view b) {
  return ascii_lower(a) == ascii_lower(b);
}

bool is_number(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string normalize_name(std::string_view name) {
  std::string out = ascii_lower(name);
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

bool under_tld(std::string_view name, std::string_view tld) {
  if (tld.empty()) return true;
  return name.size() > tld.size() && name.ends_with(tld) && name[name.size() - tld.size() - 1] == '.';
}

std::string clean_tld(std::string_view tld) {
  std::string out = ascii_lower(trim(tld));
  while (!out.empty() && out.front() == '.') out.erase(out.begin());
  while (!out.empty() && out.back() == '.') out.pop_back();
  return out;
}

struct SourceScan {
  CorpusFileStats stats;
  std::vector<std::string> names;
};

SourceScan scan_source(const std::string& label, std::string_view text, CorpusFormat format,
                       const std::string& tld) {
  SourceScan scan;
  scan.stats.path = label;
  for_each_line(text, [&](std::string_view) { ++scan.stats.lines; });
  for (auto& name : extract_domains(text, format)) {
    auto n = normalize_name(name);
    if (n.empty() || !under_tld(n, tld)) continue;
    scan.names.push_back(std::move(n));
  }
  std::sort(scan.names.begin(), scan.names.end());
  scan.names.erase(std::unique(scan.names.begin(), scan.names.end()), scan.names.end());
  scan.stats.domains = scan.names.size();
  for (const auto& n : scan.names) {
    if (has_ace_prefix(n) || n.find(".xn--") != std::string::npos) ++scan.stats.idns;
  }
  return scan;
}

}  // namespace

std::vector<std::string> extract_domains(std::string_view text, CorpusFormat format) {
  std::vector<std::string> out;
  if (format == CorpusFormat::Plain) {
    for_each_line(text, [&](std::string_view line) {
      line = trim(line);
      if (line.empty() || line.front() == '#') return;
      auto t = tokens(line);
      out.emplace_back(t.front());
    });
    return out;
  }

  std::string origin;
  std::string owner;
  for_each_line(text, [&](std::string_view line) {
    if (auto semi = line.find(';'); semi != std::string_view::npos) line = line.substr(0, semi);
    if (trim(line).empty()) return;
    const bool continuation = is_space(line.front());
    auto t = tokens(line);
    if (!continuation && t.front().starts_with('$')) {
      if (iequals(t.front(), "$ORIGIN") && t.size() > 1) origin = normalize_name(t[1]);
      return;
    }
    std::size_t k = 0;
    if (!continuation) {
      std::string_view name = t[k++];
      if (name == "@") {
        owner = origin;
      } else if (name.ends_with('.') || origin.empty()) {
        owner = std::string(name);
      } else {
        owner = std::string(name) + "." + origin;
      }
    }
    // [TTL] [class] type rdata..., TTL and class in either order
    while (k < t.size() && (is_number(t[k]) || iequals(t[k], "IN") || iequals(t[k], "CH") ||
                            iequals(t[k], "HS") || iequals(t[k], "CS")))
      ++k;
    if (k < t.size() && iequals(t[k], "NS") && !owner.empty()) out.push_back(owner);
  });
  return out;
}

DomainCorpus build_corpus(const std::vector<std::pair<std::string, std::string>>& sources,
                          const CorpusOptions& options) {
  const std::string tld = options.tld ? clean_tld(*options.tld) : std::string{};
  std::vector<SourceScan> scans(sources.size());
  if (options.workers > 1 && sources.size() > 1) {
    std::vector<std::future<SourceScan>> jobs;
    for (const auto& [label, text] : sources)
      jobs.push_back(std::async(std::launch::async, scan_source, std::cref(label), std::string_view(text),
                                options.format, std::cref(tld)));
    for (std::size_t i = 0; i < jobs.size(); ++i) scans[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < sources.size(); ++i)
      scans[i] = scan_source(sources[i].first, sources[i].second, options.format, tld);
  }

  DomainCorpus corpus;
  std::vector<std::string> names;
  for (auto& scan : scans) {
    corpus.files.push_back(scan.stats);
    names.insert(names.end(), std::make_move_iterator(scan.names.begin()),
                 std::make_move_iterator(scan.names.end()));
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());

  corpus.all.reserve(names.size());
  for (const auto& n : names) {
    corpus.all.push_back(to_unicode(n));
    const auto& d = corpus.all.back();
    if (d.error) ++corpus.undecodable;
    if (d.is_idn) corpus.idns.push_back(corpus.all.size() - 1);
  }
  return corpus;
}

DomainCorpus load_corpus(const std::vector<std::filesystem::path>& paths, const CorpusOptions& options) {
  std::vector<std::pair<std::string, std::string>> sources;
  sources.reserve(paths.size());
  for (const auto& p : paths) sources.emplace_back(p.string(), read_file(p));
  auto corpus = build_corpus(sources, options);
  if (corpus.all.empty()) throw Error("no domain names found in the corpus");
  return corpus;
}

ReferenceSet::ReferenceSet(std::vector<Reference> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) by_length_[entries_[i].label.size()].push_back(i);
}

const std::vector<std::size_t>& ReferenceSet::with_length(std::size_t len) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = by_length_.find(len);
  return it == by_length_.end() ? kEmpty : it->second;
}

ReferenceSet parse_references(std::string_view text, std::size_t top_k, std::string_view tld_filter,
                              ReferenceLoadReport* report) {
  const std::string tld = clean_tld(tld_filter);
  std::vector<Reference> entries;
  std::unordered_set<std::u32string> seen;
  std::size_t position = 0;
  for_each_line(text, [&](std::string_view line) {
    if (entries.size() >= top_k) return;
    line = trim(line);
    if (line.empty() || line.front() == '#') return;
    ++position;
    std::size_t rank = position;
    std::string_view domain = line;
    if (auto comma = line.rfind(','); comma != std::string_view::npos) {
      domain = trim(line.substr(comma + 1));
      const auto first = trim(line.substr(0, line.find(',')));
      if (is_number(first)) std::from_chars(first.data(), first.data() + first.size(), rank);
    }
    std::string name = normalize_name(domain);
    if (name.empty()) return;
    if (!tld.empty()) {
      if (!under_tld(name, tld)) return;
      name.resize(name.size() - tld.size() - 1);
    } else if (auto dot = name.rfind('.'); dot != std::string::npos) {
      name.resize(dot);
    }
    if (auto dot = name.rfind('.'); dot != std::string::npos) name.erase(0, dot + 1);
    const DomainName decoded = to_unicode(name);
    if (decoded.error) {
      if (report) report->warnings.push_back("skipping undecodable reference '" + name + "'");
      return;
    }
    auto label = utf8::decode(decoded.unicode_form);
    if (!seen.insert(label).second) return;
    entries.push_back({std::move(label), decoded.unicode_form, rank});
  });
  if (entries.size() < top_k && report && top_k != std::numeric_limits<std::size_t>::max())
    report->warnings.push_back("only " + std::to_string(entries.size()) + " references available, " +
                               std::to_string(top_k) + " requested");
  return ReferenceSet(std::move(entries));
}

ReferenceSet load_references(const std::filesystem::path& path, std::size_t top_k, std::string_view tld,
                             ReferenceLoadReport* report) {
  return parse_references(read_file(path), top_k, tld, report);
}

}  // namespace shamfinder
