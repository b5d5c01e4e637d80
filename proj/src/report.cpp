#include "shamfinder/report.hpp"

#include <json.hpp>

#include "shamfinder/error.hpp"
#include "shamfinder/utf8.hpp"

namespace shamfinder::report {

using nlohmann::json;

const std::vector<std::string>& tsv_columns() {
  static const std::vector<std::string> kColumns = {"reference", "rank",  "idn_ascii", "idn_unicode",
                                                     "ndiffs",    "diffs", "highlight"};
  return kColumns;
}

std::string highlight(const HomographMatch& m) {
  const auto label = m.idn->second_level();
  std::string out;
  std::size_t next = 0;
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (next < m.diffs.size() && m.diffs[next].pos == i) {
      out += '[';
      utf8::append(out, m.diffs[next].idn_cp);
      out += "→";
      utf8::append(out, m.diffs[next].ref_cp);
      out += ']';
      ++next;
    } else {
      utf8::append(out, label[i]);
    }
  }
  return out;
}

std::string tsv_record(const HomographMatch& m) {
  std::string diffs;
  for (const auto& d : m.diffs) {
    if (!diffs.empty()) diffs += ',';
    diffs += std::to_string(d.pos) + ':' + format_codepoint(d.ref_cp) + ':' + format_codepoint(d.idn_cp) + ':' +
             (d.delta ? std::to_string(*d.delta) : "-") + ':' + std::string(to_string(d.source));
  }
  std::string out = m.reference;
  for (const auto& field : {std::to_string(m.reference_rank), m.idn->ascii_form, m.idn->unicode_form,
                            std::to_string(m.diffs.size()), diffs, highlight(m)}) {
    out += '\t';
    out += field;
  }
  return out;
}

MatchRecord to_record(const HomographMatch& m) {
  return {m.reference, m.reference_rank, m.idn->ascii_form, m.idn->unicode_form, m.diffs};
}

std::string json_record(const HomographMatch& m) {
  json diffs = json::array();
  for (const auto& d : m.diffs) {
    diffs.push_back({{"pos", d.pos},
                     {"ref_cp", format_codepoint(d.ref_cp)},
                     {"idn_cp", format_codepoint(d.idn_cp)},
                     {"delta", d.delta ? json(*d.delta) : json(nullptr)},
                     {"source", std::string(to_string(d.source))}});
  }
  json j = {{"reference", m.reference},
            {"rank", m.reference_rank},
            {"idn_ascii", m.idn->ascii_form},
            {"idn_unicode", m.idn->unicode_form},
            {"diffs", std::move(diffs)}};
  return j.dump();
}

MatchRecord parse_json_record(const std::string& line) {
  try {
    const json j = json::parse(line);
    MatchRecord r;
    r.reference = j.at("reference").get<std::string>();
    r.rank = j.at("rank").get<std::size_t>();
    r.idn_ascii = j.at("idn_ascii").get<std::string>();
    r.idn_unicode = j.at("idn_unicode").get<std::string>();
    for (const auto& d : j.at("diffs")) {
      Diff diff;
      diff.pos = d.at("pos").get<std::size_t>();
      auto cp = [&](const char* key) {
        const auto text = d.at(key).get<std::string>();
        if (!text.starts_with("U+")) throw Error(std::string("bad ") + key);
        auto v = parse_hex_codepoint(std::string_view(text).substr(2));
        if (!v) throw Error(std::string("bad ") + key);
        return *v;
      };
      diff.ref_cp = cp("ref_cp");
      diff.idn_cp = cp("idn_cp");
      if (!d.at("delta").is_null()) diff.delta = d.at("delta").get<int>();
      auto source = parse_pair_source(d.at("source").get<std::string>());
      if (!source) throw Error("bad source");
      diff.source = *source;
      r.diffs.push_back(diff);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("bad JSON record: ") + e.what());
  }
}

}  // namespace shamfinder::report
