#include <doctest.h>

#include "support.hpp"
#include "taxoforge/error.hpp"

using namespace taxoforge;

TEST_CASE("delimited corpus keeps order and counts per typology") {
  auto c = parse_corpus("raw_name,study_id,space_type\nsafety,c1,P\nsafety,c2,S\n", CorpusFormat::Delimited);
  REQUIRE(c.size() == 2);
  CHECK(c.records()[0] == FactorRecord{"safety", "c1", SpaceType::P});
  CHECK(c.records()[1].study_id == "c2");
  CHECK(c.count(SpaceType::P) == 1);
  CHECK(c.count(SpaceType::S) == 1);
  CHECK(c.count(SpaceType::O) == 0);
}

TEST_CASE("unknown space type code names the row") {
  try {
    parse_corpus("raw_name,study_id,space_type\nsafety,c1,P\nsafety,c2,X\n", CorpusFormat::Delimited);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("row 2: unknown space type 'X'") != std::string::npos);
  }
}

TEST_CASE("malformed rows are rejected") {
  const std::string head = "raw_name,study_id,space_type\n";
  CHECK_THROWS_WITH_AS(parse_corpus(head + " ,c1,P\n", CorpusFormat::Delimited), doctest::Contains("empty raw_name"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_corpus(head + "safety,,P\n", CorpusFormat::Delimited),
                       doctest::Contains("empty study_id"), Error);
  CHECK_THROWS_WITH_AS(parse_corpus(head + "safety,c1\n", CorpusFormat::Delimited),
                       doctest::Contains("expected 3 fields"), Error);
  CHECK_THROWS_AS(parse_corpus("name,study,type\nsafety,c1,P\n", CorpusFormat::Delimited), Error);
  CHECK_THROWS_AS(parse_corpus(head + "safety,c1,S\n", CorpusFormat::Delimited, SpaceType::P), Error);
}

TEST_CASE("quoted fields, CRLF and BOM") {
  auto c = parse_corpus("\xEF\xBB\xBFraw_name,study_id,space_type\r\n\"seating, movable\",\"c\"\"1\",G\r\n\r\n",
                        CorpusFormat::Delimited);
  REQUIRE(c.size() == 1);
  CHECK(c.records()[0].raw_name == "seating, movable");
  CHECK(c.records()[0].study_id == "c\"1");
}

TEST_CASE("structured corpus") {
  auto c = parse_corpus(R"({"records":[{"raw_name":"lighting","study_id":"s1","space_type":"O"}]})",
                        CorpusFormat::Structured);
  REQUIRE(c.size() == 1);
  CHECK(c.records()[0].space_type == SpaceType::O);
  CHECK_THROWS_AS(parse_corpus(R"([{"raw_name":"x","space_type":"O"}])", CorpusFormat::Structured), Error);
}

TEST_CASE("missing dataset is an environment error") {
  CHECK_THROWS_AS(load_corpus(support::data("fixtures/nope.csv"), CorpusFormat::Delimited), IoError);
}

TEST_CASE("worked-example fixture has one row per mention") {
  auto c = load_corpus(support::data("fixtures/integration.csv"), CorpusFormat::Delimited);
  CHECK(c.size() == 35);
  std::size_t sum = 0;
  for (SpaceType t : kSpaceTypes) sum += c.count(t);
  CHECK(sum == c.size());
}

TEST_CASE("serialize then parse round-trips") {
  auto c = load_corpus(support::data("fixtures/integration.csv"), CorpusFormat::Delimited);
  CHECK(parse_corpus(serialize_corpus(c), CorpusFormat::Delimited) == c);
  Corpus tricky;
  tricky.add({"a, \"b\"", "x,y", SpaceType::F});
  CHECK(parse_corpus(serialize_corpus(tricky), CorpusFormat::Delimited) == tricky);
}

TEST_CASE("default rule file") {
  const auto& r = support::rules();
  CHECK(r.synonym_map.at("access") == "accessibility");
  CHECK(r.preserve_distinct.count("street travel safety") == 1);
}

TEST_CASE("rule validation") {
  CHECK_THROWS_WITH_AS(parse_rules(R"({"synonyms":{"a":"b","b":"a"}})"),
                       doctest::Contains("synonym map not idempotent"), Error);
  CHECK_THROWS_AS(parse_rules(R"({"synonyms":{"a":"b","b":"c"}})"), Error);
  CHECK_THROWS_AS(parse_rules(R"({"synonyms":{"x":"y"},"preserve_distinct":["X"]})"), Error);
  CHECK_THROWS_AS(parse_rules(R"({"synonyms":{"Access":"a","access":"b"}})"), Error);
  CHECK_THROWS_AS(parse_rules("{not json"), Error);
  CHECK_THROWS_AS(load_rules(support::data("nope.json")), IoError);
}

TEST_CASE("empty rule file gives the defaults") {
  auto r = parse_rules("");
  CHECK(r.case_folding);
  CHECK(r.whitespace_collapse);
  CHECK(r.synonym_map.empty());
  CHECK(r.preserve_distinct.empty());
  CHECK(normalize("  Thermal   COMFORT ", r) == "thermal comfort");
}

TEST_CASE("normalize worked examples") {
  const auto& r = support::rules();
  CHECK(normalize("Accessibility", r) == "accessibility");
  CHECK(normalize("access", r) == "accessibility");
  CHECK(normalize("ACCESS", r) == "accessibility");
  CHECK(normalize("street travel safety", r) == "street travel safety");
  CHECK(normalize("Street  Travel Safety.", r) == "street travel safety");
}

TEST_CASE("punctuation and hyphens") {
  const auto& r = support::rules();
  CHECK(normalize("barrier-free", r) == "barrier-free");
  CHECK(normalize("-barrier-free-", r) == "barrier-free");
  CHECK(normalize("seating (movable)", r) == "seating movable");
  CHECK(normalize("air quality/pollution", r) == "air quality pollution");
  CHECK(normalize("safety & security", r) == "safety security");
  CHECK_THROWS_AS(normalize(" .,; ", r), Error);
  CHECK_THROWS_AS(normalize("--", r), Error);
}

TEST_CASE("normalize is idempotent and case-insensitive on random input") {
  std::mt19937_64 rng(7);
  const std::string alphabet = "abcXYZ -.,;:()/&\t";
  const auto& r = support::rules();
  int checked = 0;
  for (int i = 0; i < 3000; ++i) {
    std::string s;
    const int len = 1 + static_cast<int>(rng() % 14);
    for (int k = 0; k < len; ++k) s += alphabet[rng() % alphabet.size()];
    std::string n;
    try {
      n = normalize(s, r);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    CHECK(normalize(n, r) == n);
    std::string upper = s;
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    CHECK(normalize(upper, r) == n);
  }
  CHECK(checked > 1000);
}
