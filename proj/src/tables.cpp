#include "shamfinder/tables.hpp"

#include <algorithm>

#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"

namespace shamfinder {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string_view strip_bom(std::string_view s) {
  if (s.starts_with("\xEF\xBB\xBF")) s.remove_prefix(3);
  return s;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    f(text.substr(pos, eol - pos), ++line_no);
    pos = eol + 1;
  }
}

// Content before any `#`, trimmed.
std::string_view data_part(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  return trim(line);
}

void skip(TableLoadReport* report, std::size_t line_no, std::string_view why) {
  if (!report) return;
  ++report->skipped;
  report->warnings.push_back("line " + std::to_string(line_no) + ": " + std::string(why));
}

}  // namespace

CodePointSet::CodePointSet(std::vector<CodePoint> points, std::string label, std::string digest)
    : points_(std::move(points)), label_(std::move(label)), digest_(std::move(digest)) {
  std::sort(points_.begin(), points_.end());
  points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
}

bool CodePointSet::contains(CodePoint cp) const {
  return std::binary_search(points_.begin(), points_.end(), cp);
}

CodePointSet parse_pvalid(std::string_view text, TableLoadReport* report) {
  std::vector<CodePoint> points;
  for_each_line(strip_bom(text), [&](std::string_view line, std::size_t line_no) {
    if (report) ++report->lines;
    const auto data = data_part(line);
    if (data.empty()) return;
    const auto semi = data.find(';');
    if (semi == std::string_view::npos) return skip(report, line_no, "missing ';'");
    const auto span = trim(data.substr(0, semi));
    const auto property = trim(data.substr(semi + 1));

    std::optional<CodePoint> lo, hi;
    if (auto dots = span.find(".."); dots != std::string_view::npos) {
      lo = parse_hex_codepoint(trim(span.substr(0, dots)));
      hi = parse_hex_codepoint(trim(span.substr(dots + 2)));
    } else {
      lo = hi = parse_hex_codepoint(span);
    }
    if (!lo || !hi) return skip(report, line_no, "unparseable code point range");
    if (*lo > *hi)
      throw TableError("line " + std::to_string(line_no) + ": malformed range " + std::string(span));
    if (property != "PVALID") return;
    for (CodePoint cp = *lo; cp <= *hi; ++cp)
      if (is_scalar_value(cp)) points.push_back(cp);
  });
  return CodePointSet(std::move(points), "IDNA-PVALID", sha256_hex(text));
}

CodePointSet load_pvalid(const std::filesystem::path& path, TableLoadReport* report) {
  return parse_pvalid(read_file(path), report);
}

std::string_view to_string(PairSource s) {
  switch (s) {
    case PairSource::UC: return "UC";
    case PairSource::SimChar: return "SIMCHAR";
    case PairSource::Both: return "BOTH";
  }
  return "?";
}

std::optional<PairSource> parse_pair_source(std::string_view text) {
  if (text == "UC") return PairSource::UC;
  if (text == "SIMCHAR") return PairSource::SimChar;
  if (text == "BOTH") return PairSource::Both;
  return std::nullopt;
}

HomoglyphDB::HomoglyphDB(std::vector<ConfusablePair> pairs, DbMetadata meta) : meta_(std::move(meta)) {
  for (auto& p : pairs)
    if (p.a > p.b) std::swap(p.a, p.b);
  std::erase_if(pairs, [](const ConfusablePair& p) { return p.a == p.b; });
  std::stable_sort(pairs.begin(), pairs.end(), [](const ConfusablePair& x, const ConfusablePair& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  for (auto& p : pairs) {
    if (!pairs_.empty() && pairs_.back().a == p.a && pairs_.back().b == p.b) {
      auto& kept = pairs_.back();
      if (!has_source(kept.source, PairSource::SimChar) || !kept.delta) kept.delta = p.delta;
      kept.source = kept.source | p.source;
      continue;
    }
    pairs_.push_back(p);
  }
  for (auto& p : pairs_) {
    if (!has_source(p.source, PairSource::SimChar))
      p.delta.reset();
    else if (!p.delta)
      throw Error("SimChar pair " + format_codepoint(p.a) + "/" + format_codepoint(p.b) + " lacks a delta");
  }
  build_index();
}

void HomoglyphDB::build_index() {
  by_key_.clear();
  adjacency_.clear();
  by_key_.reserve(pairs_.size());
  for (std::uint32_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    by_key_.emplace(key(p.a, p.b), i);
    adjacency_[p.a].push_back(p.b);
    adjacency_[p.b].push_back(p.a);
  }
  for (auto& [cp, list] : adjacency_) std::sort(list.begin(), list.end());
}

const ConfusablePair* HomoglyphDB::find(CodePoint x, CodePoint y) const {
  if (x > y) std::swap(x, y);
  auto it = by_key_.find(key(x, y));
  return it == by_key_.end() ? nullptr : &pairs_[it->second];
}

std::span<const CodePoint> HomoglyphDB::partners(CodePoint cp) const {
  auto it = adjacency_.find(cp);
  if (it == adjacency_.end()) return {};
  return it->second;
}

std::vector<CodePoint> HomoglyphDB::characters() const {
  std::vector<CodePoint> out;
  out.reserve(adjacency_.size());
  for (const auto& [cp, list] : adjacency_) out.push_back(cp);
  std::sort(out.begin(), out.end());
  return out;
}

bool HomoglyphDB::index_consistent() const {
  std::unordered_map<CodePoint, std::vector<CodePoint>> fresh;
  for (const auto& p : pairs_) {
    fresh[p.a].push_back(p.b);
    fresh[p.b].push_back(p.a);
  }
  if (fresh.size() != adjacency_.size() || by_key_.size() != pairs_.size()) return false;
  for (auto& [cp, list] : fresh) {
    std::sort(list.begin(), list.end());
    auto it = adjacency_.find(cp);
    if (it == adjacency_.end() || it->second != list) return false;
    for (CodePoint other : list) {
      const auto* pair = find(cp, other);
      if (!pair || std::min(cp, other) != pair->a || std::max(cp, other) != pair->b) return false;
    }
  }
  return true;
}

HomoglyphDB parse_confusables(std::string_view text, const CodePointSet& pvalid, TableLoadReport* report) {
  std::vector<ConfusablePair> pairs;
  for_each_line(strip_bom(text), [&](std::string_view line, std::size_t line_no) {
    if (report) ++report->lines;
    const auto data = data_part(line);
    if (data.empty()) return;
    const auto s1 = data.find(';');
    const auto s2 = s1 == std::string_view::npos ? s1 : data.find(';', s1 + 1);
    if (s2 == std::string_view::npos) return skip(report, line_no, "expected 'source ; target ; type'");
    const auto source = parse_hex_codepoint(trim(data.substr(0, s1)));
    if (!source) return skip(report, line_no, "unparseable source code point");

    auto target_text = trim(data.substr(s1 + 1, s2 - s1 - 1));
    std::vector<CodePoint> target;
    while (!target_text.empty()) {
      const auto sp = target_text.find(' ');
      const auto cp = parse_hex_codepoint(target_text.substr(0, sp));
      if (!cp) return skip(report, line_no, "unparseable target sequence");
      target.push_back(*cp);
      target_text = sp == std::string_view::npos ? std::string_view{} : trim(target_text.substr(sp));
    }
    if (target.size() != 1) return;
    if (*source == target[0] || !pvalid.contains(*source) || !pvalid.contains(target[0])) return;
    pairs.push_back({*source, target[0], PairSource::UC, std::nullopt});
  });
  if (pairs.empty()) throw TableError("no confusable pair survives the PVALID restriction");
  DbMetadata meta;
  meta.pvalid_digest = pvalid.digest();
  meta.confusables_digest = sha256_hex(text);
  return HomoglyphDB(std::move(pairs), std::move(meta));
}

HomoglyphDB load_confusables(const std::filesystem::path& path, const CodePointSet& pvalid,
                             TableLoadReport* report) {
  return parse_confusables(read_file(path), pvalid, report);
}

HomoglyphDB merge(const HomoglyphDB& lhs, const HomoglyphDB& rhs) {
  const auto& ml = lhs.metadata();
  const auto& mr = rhs.metadata();
  if (!ml.pvalid_digest.empty() && !mr.pvalid_digest.empty() && ml.pvalid_digest != mr.pvalid_digest)
    throw Error("refusing to merge databases built against different PVALID tables");
  auto pick = [](const std::string& a, const std::string& b) { return a.empty() ? b : a; };
  DbMetadata meta;
  meta.font_digest = pick(ml.font_digest, mr.font_digest);
  meta.pvalid_digest = pick(ml.pvalid_digest, mr.pvalid_digest);
  meta.confusables_digest = pick(ml.confusables_digest, mr.confusables_digest);
  meta.theta = ml.theta ? ml.theta : mr.theta;
  meta.sparse_min_black = ml.sparse_min_black ? ml.sparse_min_black : mr.sparse_min_black;

  std::vector<ConfusablePair> pairs(lhs.pairs().begin(), lhs.pairs().end());
  pairs.insert(pairs.end(), rhs.pairs().begin(), rhs.pairs().end());
  return HomoglyphDB(std::move(pairs), std::move(meta));
}

}  // namespace shamfinder
