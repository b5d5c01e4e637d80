#include "shamfinder/simchar.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"

namespace shamfinder {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned resolve_workers(unsigned workers) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  return workers;
}

struct Candidate {
  std::uint32_t i;
  std::uint32_t j;
  int delta;
};

}  // namespace

void DeltaParams::validate() const {
  if (theta < 0) throw ConfigError("theta must be >= 0");
  if (sparse_min_black < 0) throw ConfigError("sparse threshold must be >= 0");
}

PairScore score_pair(const GlyphBitmap32& x, const GlyphBitmap32& y, const DeltaParams&) {
  constexpr double n = DeltaParams::kImageSide;
  PairScore s;
  s.a = std::min(x.codepoint(), y.codepoint());
  s.b = std::max(x.codepoint(), y.codepoint());
  s.delta = delta(x, y);
  s.mse = s.delta / (n * n);
  if (s.delta > 0) s.psnr = 20.0 * std::log10(n) - 10.0 * std::log10(static_cast<double>(s.delta));
  return s;
}

std::vector<CodePoint> working_set(const GlyphSet& glyphs, const CodePointSet& pvalid) {
  std::vector<CodePoint> out;
  for (CodePoint cp : pvalid.points())
    if (glyphs.contains(cp)) out.push_back(cp);
  return out;
}

HomoglyphDB build_simchar(const GlyphSet& glyphs, const CodePointSet& pvalid, const DeltaParams& params,
                          unsigned workers, BuildReport* report) {
  params.validate();
  workers = resolve_workers(workers);
  BuildReport local;
  BuildReport& rep = report ? *report : local;
  rep = BuildReport{};

  // Images: gather the working set into one array ordered by (black count,
  // code point). Δ(x, y) >= |count(x) - count(y)|, so for each glyph only
  // the run of later glyphs within θ black pixels can pair with it.
  auto t0 = Clock::now();
  const auto members = working_set(glyphs, pvalid);
  if (members.empty()) throw Error("empty working set: no PVALID code point has a glyph");
  std::vector<GlyphBitmap32> images;
  images.reserve(members.size());
  for (CodePoint cp : members) images.push_back(*glyphs.find(cp));
  std::sort(images.begin(), images.end(), [](const GlyphBitmap32& x, const GlyphBitmap32& y) {
    return std::pair(x.black_count(), x.codepoint()) < std::pair(y.black_count(), y.codepoint());
  });
  rep.working_set = images.size();
  rep.seconds_images = seconds_since(t0);

  // Δ for every pair that can reach θ.
  t0 = Clock::now();
  const std::size_t n = images.size();
  std::vector<std::vector<Candidate>> found(workers);
  std::vector<std::size_t> compared(workers, 0);
  auto scan = [&](unsigned w) {
    auto& out = found[w];
    std::size_t count = 0;
    for (std::size_t i = w; i < n; i += workers) {
      const auto& gi = images[i];
      const int limit = gi.black_count() + params.theta;
      for (std::size_t j = i + 1; j < n && images[j].black_count() <= limit; ++j) {
        ++count;
        const int d = delta(gi, images[j]);
        if (d <= params.theta)
          out.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), d});
      }
    }
    compared[w] = count;
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
  }
  std::vector<Candidate> candidates;
  for (auto& part : found) candidates.insert(candidates.end(), part.begin(), part.end());
  for (auto c : compared) rep.comparisons += c;
  rep.candidate_pairs = candidates.size();
  rep.seconds_delta = seconds_since(t0);

  // Sparse elimination over the extracted pairs.
  t0 = Clock::now();
  for (const auto& g : images)
    if (is_sparse(g, params)) rep.sparse_codepoints.push_back(g.codepoint());
  std::sort(rep.sparse_codepoints.begin(), rep.sparse_codepoints.end());
  rep.sparse = rep.sparse_codepoints.size();
  std::vector<ConfusablePair> pairs;
  pairs.reserve(candidates.size());
  for (const auto& c : candidates) {
    const auto& gi = images[c.i];
    const auto& gj = images[c.j];
    if (is_sparse(gi, params) || is_sparse(gj, params)) continue;
    pairs.push_back({gi.codepoint(), gj.codepoint(), PairSource::SimChar, c.delta});
  }
  DbMetadata meta;
  meta.font_digest = glyphs.source_digest();
  meta.pvalid_digest = pvalid.digest();
  meta.theta = params.theta;
  meta.sparse_min_black = params.sparse_min_black;
  HomoglyphDB db(std::move(pairs), std::move(meta));
  rep.seconds_sparse = seconds_since(t0);
  return db;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

constexpr std::string_view kMagic = "#shamdb v1";

std::string opt_text(const std::string& s) { return s.empty() ? "-" : s; }
std::string opt_int(const std::optional<int>& v) { return v ? std::to_string(*v) : "-"; }

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || v < 0) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

CodePoint parse_cp_field(std::string_view f, std::size_t line_no) {
  if (f.starts_with("U+"))
    if (auto cp = parse_hex_codepoint(f.substr(2)); cp && f.size() >= 6) return *cp;
  throw DbFormatError("line " + std::to_string(line_no) + ": bad code point '" + std::string(f) + "'");
}

}  // namespace

std::string serialize_db_text(const HomoglyphDB& db) {
  const auto& m = db.metadata();
  std::string out;
  out.reserve(64 * (db.size() + 8));
  out += kMagic;
  out += "\n#font " + opt_text(m.font_digest) + "\n";
  out += "#pvalid " + opt_text(m.pvalid_digest) + "\n";
  out += "#theta " + opt_int(m.theta) + "\n";
  out += "#sparse " + opt_int(m.sparse_min_black) + "\n";
  if (!m.confusables_digest.empty()) out += "#confusables " + m.confusables_digest + "\n";
  for (const auto& p : db.pairs()) {
    out += format_codepoint(p.a);
    out += '\t';
    out += format_codepoint(p.b);
    out += '\t';
    out += p.delta ? std::to_string(*p.delta) : "-";
    out += '\t';
    out += to_string(p.source);
    out += '\n';
  }
  return out;
}

void serialize_db(const HomoglyphDB& db, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  const auto text = serialize_db_text(db);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write error on " + path.string());
}

HomoglyphDB deserialize_db_text(std::string_view text, const DbMetadata* expected, DbReadReport* report) {
  if (text.empty()) throw DbFormatError("empty database file");
  if (text.back() != '\n') throw DbFormatError("truncated database file (no final newline)");
  text.remove_suffix(1);
  const auto lines = split(text, '\n');
  if (lines.front() != kMagic) {
    if (lines.front().starts_with("#shamdb "))
      throw DbFormatError("unsupported database version '" + std::string(lines.front().substr(8)) + "'");
    throw DbFormatError("not a shamdb file");
  }

  DbMetadata meta;
  std::size_t i = 1;
  auto header = [&](std::string_view name) -> std::optional<std::string_view> {
    if (i >= lines.size() || !lines[i].starts_with(name) || lines[i].size() <= name.size() + 1 ||
        lines[i][name.size()] != ' ')
      return std::nullopt;
    return lines[i++].substr(name.size() + 1);
  };
  auto required = [&](std::string_view name) {
    auto v = header(name);
    if (!v) throw DbFormatError("truncated header: missing '" + std::string(name) + "'");
    return *v;
  };
  auto digest = [](std::string_view v) { return v == "-" ? std::string{} : std::string(v); };
  auto number = [&](std::string_view name, std::string_view v) -> std::optional<int> {
    if (v == "-") return std::nullopt;
    auto n = parse_int(v);
    if (!n) throw DbFormatError("bad " + std::string(name) + " value '" + std::string(v) + "'");
    return n;
  };
  meta.font_digest = digest(required("#font"));
  meta.pvalid_digest = digest(required("#pvalid"));
  meta.theta = number("#theta", required("#theta"));
  meta.sparse_min_black = number("#sparse", required("#sparse"));
  if (auto v = header("#confusables")) meta.confusables_digest = std::string(*v);

  std::vector<ConfusablePair> pairs;
  pairs.reserve(lines.size() - i);
  for (; i < lines.size(); ++i) {
    const auto line = lines[i];
    const std::size_t line_no = i + 1;
    if (line.empty() || line.front() == '#')
      throw DbFormatError("line " + std::to_string(line_no) + ": unexpected line in pair section");
    const auto f = split(line, '\t');
    if (f.size() != 4) throw DbFormatError("line " + std::to_string(line_no) + ": expected 4 fields");
    ConfusablePair p;
    p.a = parse_cp_field(f[0], line_no);
    p.b = parse_cp_field(f[1], line_no);
    if (p.a >= p.b) throw DbFormatError("line " + std::to_string(line_no) + ": pair not in (min, max) order");
    if (f[2] != "-") {
      p.delta = parse_int(f[2]);
      if (!p.delta) throw DbFormatError("line " + std::to_string(line_no) + ": bad delta");
    }
    auto source = parse_pair_source(f[3]);
    if (!source) throw DbFormatError("line " + std::to_string(line_no) + ": bad source tag");
    p.source = *source;
    if (has_source(p.source, PairSource::SimChar) != p.delta.has_value())
      throw DbFormatError("line " + std::to_string(line_no) + ": delta must be present exactly for SimChar pairs");
    if (!pairs.empty() && std::tie(pairs.back().a, pairs.back().b) >= std::tie(p.a, p.b))
      throw DbFormatError("line " + std::to_string(line_no) + ": pairs not sorted");
    pairs.push_back(p);
  }

  if (expected && report) {
    auto check = [&](std::string_view what, const std::string& want, const std::string& got) {
      if (!want.empty() && !got.empty() && want != got)
        report->warnings.push_back(std::string(what) + " digest mismatch: file " + got + ", expected " + want);
    };
    check("font", expected->font_digest, meta.font_digest);
    check("pvalid", expected->pvalid_digest, meta.pvalid_digest);
    check("confusables", expected->confusables_digest, meta.confusables_digest);
  }
  return HomoglyphDB(std::move(pairs), std::move(meta));
}

HomoglyphDB deserialize_db(const std::filesystem::path& path, const DbMetadata* expected, DbReadReport* report) {
  return deserialize_db_text(read_file(path), expected, report);
}

}  // namespace shamfinder
