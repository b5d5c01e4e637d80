#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "doctest.h"
#include "oracles.hpp"
#include "shamfinder/error.hpp"
#include "shamfinder/tables.hpp"

using namespace shamfinder;

namespace {

using PairKey = std::tuple<CodePoint, CodePoint, PairSource>;

std::set<PairKey> pair_set(const HomoglyphDB& db) {
  std::set<PairKey> out;
  for (const auto& p : db.pairs()) out.emplace(p.a, p.b, p.source);
  return out;
}

HomoglyphDB random_db(std::mt19937_64& rng, std::size_t n, PairSource source) {
  std::uniform_int_distribution<CodePoint> cp(0x61, 0x61 + 40);
  std::uniform_int_distribution<int> d(0, 4);
  std::vector<ConfusablePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    ConfusablePair p{cp(rng), cp(rng), source, std::nullopt};
    if (has_source(source, PairSource::SimChar)) p.delta = d(rng);
    pairs.push_back(p);
  }
  DbMetadata meta;
  meta.pvalid_digest = "P";
  return HomoglyphDB(pairs, meta);
}

}  // namespace

TEST_CASE("parse_pvalid: ranges, single points and filtered properties") {
  TableLoadReport report;
  const auto set = parse_pvalid(
      "# comment\n"
      "0061..007A ; PVALID # a..z\n"
      "0041..005A ; DISALLOWED\n"
      "00DF ; PVALID\n"
      "200C ; CONTEXTJ\n"
      "not a line\n"
      "ZZZZ ; PVALID\n",
      &report);
  CHECK(set.size() == 27);
  CHECK(set.contains(U'a'));
  CHECK(set.contains(U'z'));
  CHECK(set.contains(0xDF));
  CHECK(!set.contains(U'A'));
  CHECK(!set.contains(0x200C));
  CHECK(report.skipped == 2);
  CHECK(report.lines == 7);
  CHECK(set.label() == "IDNA-PVALID");
  CHECK(!set.digest().empty());
}

TEST_CASE("parse_pvalid: single range line") {
  CHECK(parse_pvalid("0061..007A ; PVALID\n").size() == 26);
  CHECK(parse_pvalid("0041..005A ; DISALLOWED\n").size() == 0);
}

TEST_CASE("parse_pvalid: start > end is an error") {
  CHECK_THROWS_AS(parse_pvalid("007A..0061 ; PVALID\n"), TableError);
}

TEST_CASE("load_pvalid: real table has 123,006 PVALID code points") {
  const auto& p = oracle::real_pvalid();
  CHECK(p.size() == 123006);
  CHECK(p.contains(U'a'));
  CHECK(p.contains(0x0430));
  CHECK(p.contains(0x0131));
  CHECK(!p.contains(U'A'));
  CHECK(!p.contains(U'.'));
}

TEST_CASE("load_pvalid is order independent") {
  std::ifstream in(oracle::data_path("idna-pvalid-12.1.0.txt"));
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  std::mt19937_64 rng(7);
  for (int round = 0; round < 3; ++round) {
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    CHECK(parse_pvalid(text) == oracle::real_pvalid());
  }
}

TEST_CASE("parse_confusables: single-codepoint targets restricted to PVALID") {
  const auto pvalid = CodePointSet({0x61, 0x62, 0x430, 0x306, 0x307, 0x6E8});
  const auto db = parse_confusables(
      "0430 ;\t0061 ;\tMA\t# ( а → a )\n"
      "06E8 ;\t0306 0307 ;\tMA\t# two-codepoint target\n"
      "0041 ;\t0061 ;\tMA\t# source not PVALID\n"
      "0062 ;\t0062 ;\tMA\t# self\n",
      pvalid);
  REQUIRE(db.size() == 1);
  const auto& p = db.pairs()[0];
  CHECK(p.a == 0x61);
  CHECK(p.b == 0x430);
  CHECK(p.source == PairSource::UC);
  CHECK(!p.delta);
  CHECK(db.contains(0x430, 0x61));
  CHECK(db.contains(0x61, 0x430));
}

TEST_CASE("parse_confusables: zero surviving pairs is an error") {
  CHECK_THROWS_AS(parse_confusables("0041 ;\t0061 ;\tMA\n", CodePointSet({0x62})), TableError);
}

TEST_CASE("load_confusables: real table") {
  const auto& uc = oracle::real_uc();
  CHECK(uc.size() == 627);
  CHECK(uc.characters().size() == 980);
  const auto* p = uc.find(0x430, 0x61);
  REQUIRE(p != nullptr);
  CHECK(p->source == PairSource::UC);
  CHECK(uc.contains(0x131, U'i'));
  CHECK(uc.index_consistent());
  for (const auto& q : uc.pairs()) {
    REQUIRE(oracle::real_pvalid().contains(q.a));
    REQUIRE(oracle::real_pvalid().contains(q.b));
  }
}

TEST_CASE("HomoglyphDB: canonical orientation, dedup and source union") {
  DbMetadata meta;
  const HomoglyphDB db({{0x62, 0x61, PairSource::UC, std::nullopt},
                        {0x61, 0x62, PairSource::SimChar, 3},
                        {0x63, 0x63, PairSource::UC, std::nullopt},
                        {0x64, 0x61, PairSource::UC, 9}},
                       meta);
  REQUIRE(db.size() == 2);
  CHECK(db.pairs()[0] == ConfusablePair{0x61, 0x62, PairSource::Both, 3});
  CHECK(db.pairs()[1] == ConfusablePair{0x61, 0x64, PairSource::UC, std::nullopt});
  const auto partners = db.partners(0x61);
  CHECK(std::vector<CodePoint>(partners.begin(), partners.end()) == std::vector<CodePoint>{0x62, 0x64});
  CHECK(db.partners(0x63).empty());
  CHECK(db.index_consistent());
  CHECK_THROWS(HomoglyphDB({{0x61, 0x62, PairSource::SimChar, std::nullopt}}, meta));
}

TEST_CASE("HomoglyphDB: adjacency symmetry on the real UC table") {
  const auto& uc = oracle::real_uc();
  for (CodePoint c : uc.characters())
    for (CodePoint p : uc.partners(c)) {
      const auto back = uc.partners(p);
      REQUIRE(std::binary_search(back.begin(), back.end(), c));
    }
}

TEST_CASE("merge: identity, idempotence, commutativity, associativity") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const auto x = random_db(rng, 30, PairSource::UC);
    const auto y = random_db(rng, 30, PairSource::SimChar);
    const auto z = random_db(rng, 30, PairSource::UC);
    const HomoglyphDB empty({}, DbMetadata{});

    CHECK(merge(x, empty) == x);
    CHECK(merge(x, x) == x);
    CHECK(pair_set(merge(x, y)) == pair_set(merge(y, x)));
    CHECK(pair_set(merge(merge(x, y), z)) == pair_set(merge(x, merge(y, z))));
    const auto m = merge(x, y);
    CHECK(m.index_consistent());
    CHECK(m.size() >= std::max(x.size(), y.size()));
    for (const auto& p : m.pairs()) {
      CHECK(has_source(p.source, PairSource::SimChar) == p.delta.has_value());
      if (has_source(p.source, PairSource::SimChar)) CHECK(*p.delta == *y.find(p.a, p.b)->delta);
    }
  }
}

TEST_CASE("merge: a pair present in both keeps both tags and the delta") {
  DbMetadata meta;
  meta.pvalid_digest = "P";
  const HomoglyphDB uc({{0x61, 0x430, PairSource::UC, std::nullopt}}, meta);
  const HomoglyphDB sim({{0x430, 0x61, PairSource::SimChar, 0}}, meta);
  const auto m = merge(uc, sim);
  REQUIRE(m.size() == 1);
  CHECK(m.pairs()[0] == ConfusablePair{0x61, 0x430, PairSource::Both, 0});
  CHECK(merge(sim, uc).pairs()[0] == m.pairs()[0]);
}

TEST_CASE("merge: different PVALID digests are refused") {
  DbMetadata a, b;
  a.pvalid_digest = "A";
  b.pvalid_digest = "B";
  const HomoglyphDB x({{0x61, 0x62, PairSource::UC, std::nullopt}}, a);
  const HomoglyphDB y({{0x61, 0x63, PairSource::UC, std::nullopt}}, b);
  CHECK_THROWS_AS(merge(x, y), Error);
}

TEST_CASE("pair source tags") {
  CHECK(to_string(PairSource::UC) == "UC");
  CHECK(to_string(PairSource::SimChar) == "SIMCHAR");
  CHECK(to_string(PairSource::Both) == "BOTH");
  CHECK((PairSource::UC | PairSource::SimChar) == PairSource::Both);
  for (auto s : {PairSource::UC, PairSource::SimChar, PairSource::Both}) CHECK(parse_pair_source(to_string(s)) == s);
  CHECK(!parse_pair_source("uc"));
}
