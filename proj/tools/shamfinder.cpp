// shamfinder: build homoglyph databases and scan domain lists for IDN
// homographs.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "shamfinder/detector.hpp"
#include "shamfinder/digest.hpp"
#include "shamfinder/error.hpp"
#include "shamfinder/font.hpp"
#include "shamfinder/ingest.hpp"
#include "shamfinder/punycode.hpp"
#include "shamfinder/report.hpp"
#include "shamfinder/simchar.hpp"
#include "shamfinder/tables.hpp"
#include "shamfinder/utf8.hpp"

namespace fs = std::filesystem;
using namespace shamfinder;

namespace {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kNoCandidates = 3,
  kDecodeError = 4,
};

enum class OutputFormat { Tsv, JsonLines };

struct RunConfig {
  std::string font;
  std::string pvalid;
  std::string confusables;
  std::string db;
  std::string output;
  int theta = 4;
  int sparse = 10;
  std::string references;
  std::size_t top_k = 10000;
  std::string tld = "com";
  std::vector<std::string> corpus;
  bool zone = false;
  OutputFormat format = OutputFormat::Tsv;
  std::size_t revert_cap = 1000;
  unsigned workers = 0;
  std::vector<std::string> inputs;  // merge-db
  std::string label;                // revert
  std::string codepoint;            // inspect
  bool art = true;
};

// Thrown with the name of the pipeline phase that failed.
struct PhaseError : std::runtime_error {
  PhaseError(std::string phase, const std::string& what) : std::runtime_error(what), phase(std::move(phase)) {}
  std::string phase;
};

template <class F>
auto phase(const char* name, F&& f) {
  try {
    return f();
  } catch (const PhaseError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw PhaseError(name, e.what());
  }
}

void require_file(const std::string& path, const char* what) {
  if (path.empty()) throw ConfigError(std::string("missing ") + what + " path");
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw ConfigError(std::string(what) + " not readable: " + path);
}

double elapsed(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

// Writes to --output when given, stdout otherwise.
class Sink {
public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ConfigError("cannot write " + path);
    }
  }
  std::ostream& out() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

void print_warnings(const std::vector<std::string>& warnings, const char* where, std::size_t limit = 5) {
  for (std::size_t i = 0; i < warnings.size() && i < limit; ++i)
    std::cerr << "warning (" << where << "): " << warnings[i] << "\n";
  if (warnings.size() > limit)
    std::cerr << "warning (" << where << "): " << warnings.size() - limit << " more\n";
}

HomoglyphDB read_db(const RunConfig& cfg) {
  require_file(cfg.db, "database");
  DbReadReport rep;
  auto db = phase("load-db", [&] { return deserialize_db(fs::path(cfg.db), nullptr, &rep); });
  print_warnings(rep.warnings, "load-db");
  return db;
}

int cmd_build_db(const RunConfig& cfg) {
  require_file(cfg.font, "font");
  require_file(cfg.pvalid, "pvalid table");
  if (!cfg.confusables.empty()) require_file(cfg.confusables, "confusables table");
  if (cfg.output.empty()) throw ConfigError("missing --output");
  DeltaParams params{cfg.theta, cfg.sparse};
  params.validate();

  auto t0 = std::chrono::steady_clock::now();
  const GlyphSet glyphs = phase("load-font", [&] { return load_font(cfg.font); });
  print_warnings(glyphs.warnings(), "load-font");
  const double t_font = elapsed(t0);

  TableLoadReport pv_rep;
  const CodePointSet pvalid = phase("load-pvalid", [&] { return load_pvalid(cfg.pvalid, &pv_rep); });
  print_warnings(pv_rep.warnings, "load-pvalid");

  BuildReport rep;
  HomoglyphDB db = phase("compute-delta", [&] { return build_simchar(glyphs, pvalid, params, cfg.workers, &rep); });
  const std::size_t simchar_pairs = db.size();
  const std::size_t simchar_chars = db.characters().size();

  std::size_t uc_pairs = 0;
  if (!cfg.confusables.empty()) {
    TableLoadReport uc_rep;
    auto uc = phase("load-confusables", [&] { return load_confusables(cfg.confusables, pvalid, &uc_rep); });
    print_warnings(uc_rep.warnings, "load-confusables");
    uc_pairs = uc.size();
    db = phase("merge", [&] { return merge(db, uc); });
  }
  phase("write-db", [&] {
    serialize_db(db, fs::path(cfg.output));
    return 0;
  });

  std::size_t by_source[4] = {};
  for (const auto& p : db.pairs()) ++by_source[static_cast<int>(p.source)];

  auto& out = std::cout;
  out << std::fixed << std::setprecision(3);
  out << "font glyphs:            " << glyphs.size() << "  (" << t_font << " s)\n";
  out << "pvalid code points:     " << pvalid.size() << "\n";
  out << "working set:            " << rep.working_set << "\n";
  out << "sparse glyphs:          " << rep.sparse << "  (< " << params.sparse_min_black << " black pixels)\n";
  out << "delta comparisons:      " << rep.comparisons << "\n";
  out << "pairs with delta <= " << params.theta << ":  " << rep.candidate_pairs << " before sparse elimination\n";
  out << "simchar:                " << simchar_chars << " characters, " << simchar_pairs << " pairs\n";
  if (!cfg.confusables.empty()) out << "uc (pvalid, 1:1):       " << uc_pairs << " pairs\n";
  out << "database:               " << db.size() << " pairs (SIMCHAR " << by_source[2] << ", UC " << by_source[1]
      << ", BOTH " << by_source[3] << ") -> " << cfg.output << "\n";
  const double total = rep.seconds_images + rep.seconds_delta + rep.seconds_sparse;
  auto share = [&](double s) { return total > 0 ? 100.0 * s / total : 0.0; };
  out << std::setprecision(3);
  out << "phase generating images:  " << rep.seconds_images << " s (" << std::setprecision(1)
      << share(rep.seconds_images) << "%)\n"
      << std::setprecision(3);
  out << "phase computing delta:    " << rep.seconds_delta << " s (" << std::setprecision(1)
      << share(rep.seconds_delta) << "%)\n"
      << std::setprecision(3);
  out << "phase eliminating sparse: " << rep.seconds_sparse << " s (" << std::setprecision(1)
      << share(rep.seconds_sparse) << "%)\n";
  return kOk;
}

int cmd_merge_db(const RunConfig& cfg) {
  if (cfg.inputs.size() < 2) throw ConfigError("merge-db needs at least two input databases");
  if (cfg.output.empty()) throw ConfigError("missing --output");
  for (const auto& in : cfg.inputs) require_file(in, "database");
  HomoglyphDB merged = phase("load-db", [&] { return deserialize_db(fs::path(cfg.inputs.front())); });
  for (std::size_t i = 1; i < cfg.inputs.size(); ++i) {
    auto next = phase("load-db", [&] { return deserialize_db(fs::path(cfg.inputs[i])); });
    merged = phase("merge", [&] { return merge(merged, next); });
  }
  phase("write-db", [&] {
    serialize_db(merged, fs::path(cfg.output));
    return 0;
  });
  std::cout << "merged " << cfg.inputs.size() << " databases: " << merged.size() << " pairs, "
            << merged.characters().size() << " characters -> " << cfg.output << "\n";
  return kOk;
}

int cmd_detect(const RunConfig& cfg) {
  require_file(cfg.references, "reference list");
  if (cfg.corpus.empty()) throw ConfigError("missing --corpus");
  for (const auto& c : cfg.corpus) require_file(c, "corpus file");
  const HomoglyphDB db = read_db(cfg);

  ReferenceLoadReport ref_rep;
  const ReferenceSet refs = phase("load-references", [&] { return load_references(cfg.references, cfg.top_k, cfg.tld, &ref_rep); });
  print_warnings(ref_rep.warnings, "load-references");

  CorpusOptions opts;
  if (!cfg.tld.empty()) opts.tld = cfg.tld;
  opts.format = cfg.zone ? CorpusFormat::Zone : CorpusFormat::Plain;
  opts.workers = cfg.workers;
  std::vector<fs::path> paths(cfg.corpus.begin(), cfg.corpus.end());
  DomainCorpus corpus;
  phase("load-corpus", [&] {
    std::vector<std::pair<std::string, std::string>> sources;
    for (const auto& p : paths) sources.emplace_back(p.string(), read_file(p));
    corpus = build_corpus(sources, opts);
    return 0;
  });

  DetectReport rep;
  const auto matches = phase("detect", [&] { return detect(refs, corpus, db, cfg.workers, &rep); });

  Sink sink(cfg.output);
  auto& out = sink.out();
  if (cfg.format == OutputFormat::Tsv) {
    out << "#shamfinder detect\n";
    out << "#db " << cfg.db << " pairs=" << db.size() << " theta="
        << (db.metadata().theta ? std::to_string(*db.metadata().theta) : "-") << "\n";
    out << "#references " << cfg.references << " top_k=" << cfg.top_k << " tld=" << cfg.tld
        << " loaded=" << refs.size() << "\n";
    for (const auto& f : corpus.files)
      out << "#corpus " << f.path << " lines=" << f.lines << " domains=" << f.domains << " idns=" << f.idns << "\n";
    out << "#";
    const auto& cols = report::tsv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
    out << "\n";
    for (const auto& m : matches) out << report::tsv_record(m) << "\n";
  } else {
    for (const auto& m : matches) out << report::json_record(m) << "\n";
  }
  out.flush();

  std::cerr << "summary: references=" << rep.references << " domains=" << corpus.size()
            << " idns=" << corpus.idns.size() << " undecodable=" << corpus.undecodable
            << " matches=" << matches.size() << " seconds=" << rep.seconds
            << " avg_seconds_per_reference=" << rep.seconds_per_reference() << "\n";
  return kOk;
}

int cmd_revert(const RunConfig& cfg) {
  const HomoglyphDB db = read_db(cfg);
  std::u32string label;
  if (utf8::is_ascii(cfg.label)) {
    const DomainName d = to_unicode(cfg.label);
    if (d.error) {
      std::cerr << "error [decode]: " << *d.error << "\n";
      return kDecodeError;
    }
    label = d.second_level();
  } else {
    try {
      label = utf8::decode(cfg.label);
    } catch (const std::exception& e) {
      std::cerr << "error [decode]: " << e.what() << "\n";
      return kDecodeError;
    }
    if (auto dot = label.find(U'.'); dot != std::u32string::npos) {
      const DomainName d{cfg.label, cfg.label, false, std::nullopt};
      label = d.second_level();
    }
  }
  const auto result = revert(label, db, cfg.revert_cap);
  if (result.candidates.empty()) {
    std::cerr << "no plausible ASCII original for '" << utf8::encode(label) << "'\n";
    return kNoCandidates;
  }
  std::size_t rank = 0;
  for (const auto& c : result.candidates) {
    std::cout << ++rank << "\t" << c.original << "\t" << c.substitutions << "\t" << c.total_delta << "\t";
    for (std::size_t i = 0; i < c.details.size(); ++i) {
      const auto& s = c.details[i];
      std::string from, to;
      utf8::append(from, s.from);
      utf8::append(to, s.to);
      std::cout << (i ? "," : "") << s.pos << ":[" << from << "→" << to << "]"
                << (s.delta ? "Δ" + std::to_string(*s.delta) : std::string("UC"));
    }
    std::cout << "\n";
  }
  if (result.truncated) std::cerr << "candidate list truncated at " << cfg.revert_cap << "\n";
  return kOk;
}

void print_side_by_side(std::ostream& out, const GlyphBitmap32& a, const GlyphBitmap32& b) {
  const auto ra = a.render();
  const auto rb = b.render();
  constexpr std::size_t w = GlyphBitmap32::kSide + 1;
  for (int r = 0; r < GlyphBitmap32::kSide; ++r)
    out << "    " << ra.substr(r * w, w - 1) << "   " << rb.substr(r * w, w - 1) << "\n";
}

int cmd_inspect(const RunConfig& cfg) {
  const auto cp = parse_codepoint(cfg.codepoint);
  if (!cp) throw ConfigError("cannot parse code point '" + cfg.codepoint + "'");
  const HomoglyphDB db = read_db(cfg);
  std::optional<GlyphSet> glyphs;
  if (!cfg.font.empty()) {
    require_file(cfg.font, "font");
    glyphs = phase("load-font", [&] { return load_font(cfg.font); });
  }

  auto& out = std::cout;
  auto show = [](CodePoint c) {
    std::string s = format_codepoint(c) + " '";
    utf8::append(s, c);
    return s + "'";
  };
  const GlyphBitmap32* self = glyphs ? glyphs->find(*cp) : nullptr;
  if (glyphs && !self) out << "no glyph for " << format_codepoint(*cp) << " in the font\n";

  const auto partners = db.partners(*cp);
  if (partners.empty()) {
    out << "no partners for " << show(*cp) << " in the database\n";
    return kOk;
  }
  std::size_t simchar = 0, uc = 0;
  for (CodePoint p : partners) {
    const auto* pair = db.find(*cp, p);
    simchar += has_source(pair->source, PairSource::SimChar);
    uc += has_source(pair->source, PairSource::UC);
  }
  out << show(*cp) << ": " << partners.size() << " partners (SIMCHAR " << simchar << ", UC " << uc << ")\n";
  for (CodePoint p : partners) {
    const auto* pair = db.find(*cp, p);
    out << "  " << show(p) << "\tdelta=" << (pair->delta ? std::to_string(*pair->delta) : "-")
        << "\tsource=" << to_string(pair->source) << "\n";
    if (!glyphs || !cfg.art) continue;
    const GlyphBitmap32* other = glyphs->find(p);
    if (self && other)
      print_side_by_side(out, *self, *other);
    else
      out << "    (no glyph for " << format_codepoint(self ? p : *cp) << ")\n";
  }
  return kOk;
}

// CLI11 reads a config file before environment variables, which would let
// the file win. Apply it after parsing instead, and only to options that no
// flag or SHAMDB_* variable has set.
void apply_config(CLI::App& app, const std::string& path) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::Error& e) {
    throw ConfigError("cannot read config " + path + ": " + e.what());
  }
  CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    CLI::App* scope = active;
    if (!item.parents.empty()) {
      scope = &app;
      for (const auto& parent : item.parents) {
        scope = scope ? scope->get_subcommand_no_throw(parent) : nullptr;
      }
      if (!scope) throw ConfigError("unknown config section '" + item.fullname() + "'");
    }
    CLI::Option* opt = scope->get_option_no_throw("--" + item.name);
    if (!opt) {
      if (!item.parents.empty()) throw ConfigError("unknown config key '" + item.fullname() + "'");
      continue;  // top-level key meant for another subcommand
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(item.inputs);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw ConfigError("config key '" + item.fullname() + "': " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homoglyph database builder and IDN homograph detector"};
  std::string config_path;
  app.add_option("--config", config_path, "INI/TOML configuration file (flags and SHAMDB_* variables win)")
      ->envname("SHAMDB_CONFIG");
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_workers = [&](CLI::App* sub) {
    sub->add_option("-j,--workers", cfg.workers, "Worker threads (0 = all cores)")->envname("SHAMDB_WORKERS");
  };

  auto* build = app.add_subcommand("build-db", "Build the SimChar database (optionally merged with UC)");
  build->add_option("--font", cfg.font, "GNU Unifont .hex file")->envname("SHAMDB_FONT");
  build->add_option("--pvalid", cfg.pvalid, "IDNA2008 derived-property table")->envname("SHAMDB_PVALID");
  build->add_option("--confusables", cfg.confusables, "Unicode confusables.txt")->envname("SHAMDB_CONFUSABLES");
  build->add_option("-o,--output", cfg.output, "Database file to write")->envname("SHAMDB_DB");
  build->add_option("--theta", cfg.theta, "Maximum pixel difference")->envname("SHAMDB_THETA");
  build->add_option("--sparse", cfg.sparse, "Minimum black pixels for a glyph to pair")->envname("SHAMDB_SPARSE");
  add_workers(build);

  auto* merge_cmd = app.add_subcommand("merge-db", "Union of two or more databases");
  merge_cmd->add_option("inputs", cfg.inputs, "Database files")->required();
  merge_cmd->add_option("-o,--output", cfg.output, "Database file to write")->required();

  auto* detect_cmd = app.add_subcommand("detect", "Find homographs of reference names among IDNs");
  detect_cmd->add_option("--db", cfg.db, "Database file")->envname("SHAMDB_DB");
  detect_cmd->add_option("--references", cfg.references, "Ranked reference list (plain or rank,domain CSV)")
      ->envname("SHAMDB_REFERENCES");
  detect_cmd->add_option("--top-k", cfg.top_k, "Number of references to use")->envname("SHAMDB_TOP_K");
  detect_cmd->add_option("--tld", cfg.tld, "TLD to restrict references and corpus to (empty = any)")
      ->envname("SHAMDB_TLD");
  detect_cmd->add_option("--corpus", cfg.corpus, "Domain list files")->envname("SHAMDB_CORPUS");
  detect_cmd->add_flag("--zone", cfg.zone, "Corpus files are DNS zone files (NS owners)");
  detect_cmd->add_option("--format", cfg.format, "tsv or jsonl")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, OutputFormat>{{"tsv", OutputFormat::Tsv}, {"jsonl", OutputFormat::JsonLines},
                                              {"json-lines", OutputFormat::JsonLines}},
          CLI::ignore_case))
      ->envname("SHAMDB_FORMAT");
  detect_cmd->add_option("-o,--output", cfg.output, "Write records here instead of stdout");
  add_workers(detect_cmd);

  auto* revert_cmd = app.add_subcommand("revert", "List ASCII originals a homograph label may imitate");
  revert_cmd->add_option("label", cfg.label, "Unicode label or xn-- form")->required();
  revert_cmd->add_option("--db", cfg.db, "Database file")->envname("SHAMDB_DB");
  revert_cmd->add_option("--cap", cfg.revert_cap, "Maximum candidates")->envname("SHAMDB_REVERT_CAP");

  auto* inspect_cmd = app.add_subcommand("inspect", "Show the partners of one character");
  inspect_cmd->add_option("codepoint", cfg.codepoint, "Character, U+XXXX or 0xXXXX")->required();
  inspect_cmd->add_option("--db", cfg.db, "Database file")->envname("SHAMDB_DB");
  inspect_cmd->add_option("--font", cfg.font, "Font for glyph rendering")->envname("SHAMDB_FONT");
  inspect_cmd->add_flag("--art,!--no-art", cfg.art, "Render glyph bitmaps");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) apply_config(app, config_path);
    if (build->parsed()) return cmd_build_db(cfg);
    if (merge_cmd->parsed()) return cmd_merge_db(cfg);
    if (detect_cmd->parsed()) return cmd_detect(cfg);
    if (revert_cmd->parsed()) return cmd_revert(cfg);
    if (inspect_cmd->parsed()) return cmd_inspect(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error [config]: " << e.what() << "\n";
    return kConfigError;
  } catch (const PhaseError& e) {
    std::cerr << "error [" << e.phase << "]: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
