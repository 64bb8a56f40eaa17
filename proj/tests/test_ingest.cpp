#include <random>
#include <set>
#include <sstream>

#include "citeprof/error.hpp"
#include "citeprof/ingest.hpp"
#include "doctest.h"

using namespace citeprof;
using namespace citeprof::ingest;

namespace {

ParsedDataset parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in, Format::jsonl);
}

PaperRecord rec(std::string id, int year, std::vector<std::string> refs = {}) {
  PaperRecord r;
  r.id = std::move(id);
  r.year = year;
  r.references = std::move(refs);
  return r;
}

}  // namespace

TEST_CASE("well-formed stream parses every record") {
  const auto d = parse_jsonl(
      R"({"id":"a","year":2000,"references":["b"]})"
      "\n"
      R"({"id":"b","year":1999,"venue_type":"journal","authors":["x"]})"
      "\n"
      R"({"id":"c","year":2001,"fields":["ml"],"category":"MonDec"})"
      "\n");
  CHECK(d.records.size() == 3);
  CHECK(d.report.rejected() == 0);
  CHECK(d.records[1].venue == VenueType::journal);
  CHECK(d.records[2].category == Category::MonDec);
}

TEST_CASE("a bad year rejects the record") {
  const auto d = parse_jsonl(R"({"id":"a","year":"20XX"})"
                             "\n");
  CHECK(d.records.empty());
  REQUIRE(d.report.rejected() == 1);
  CHECK(d.report.rejections[0].reason == RejectReason::bad_year);
}

TEST_CASE("duplicate ids keep the first record") {
  std::string text;
  for (int i = 1; i <= 10; ++i) {
    const int id = i == 7 ? 2 : i;
    text += R"({"id":"p)" + std::to_string(id) + R"(","year":2000})" + "\n";
  }
  const auto d = parse_jsonl(text);
  CHECK(d.records.size() == 9);
  REQUIRE(d.report.rejected() == 1);
  CHECK(d.report.rejections[0].reason == RejectReason::duplicate_id);
  CHECK(d.report.rejections[0].line == 7);
}

TEST_CASE("malformed lines are skipped, not fatal") {
  const auto d = parse_jsonl("{not json\n" R"({"year":2000})" "\n" R"({"id":"ok","year":2000})" "\n");
  CHECK(d.records.size() == 1);
  CHECK(d.report.count(RejectReason::malformed) == 1);
  CHECK(d.report.count(RejectReason::missing_id) == 1);
}

TEST_CASE("csv and jsonl round trip") {
  std::vector<PaperRecord> records{rec("a", 2000, {"b", "c"}), rec("b", 1990), rec("c,q", 1995)};
  records[0].authors = {"Ann \"A\" Lee", "Bo"};
  records[0].venue = VenueType::conference;
  records[1].fields = {"ir"};
  records[2].category = Category::PeakLate;
  for (auto fmt : {Format::jsonl, Format::csv}) {
    std::stringstream ss;
    write_dataset(ss, records, fmt);
    const auto back = parse_dataset(ss, fmt);
    CHECK(back.report.rejected() == 0);
    CHECK(back.records == records);
  }
}

TEST_CASE("csv line splitting honours quotes") {
  const auto cells = split_csv_line(R"(a,"b,c","d""e",)");
  REQUIRE(cells);
  CHECK(*cells == std::vector<std::string>{"a", "b,c", "d\"e", ""});
  CHECK_FALSE(split_csv_line("\"open"));
  CHECK(csv_quote("plain") == "plain");
  CHECK(csv_quote("a,b") == "\"a,b\"");
}

TEST_CASE("graph edges and dangling references") {
  const auto g = build_graph({rec("A", 2000, {"B", "X"}), rec("B", 1999)});
  CHECK(g.node_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.dangling_references() == 1);
  const auto a = g.at("A");
  const auto b = g.at("B");
  REQUIRE(g.references(a).size() == 1);
  CHECK(g.references(a)[0] == b);
  CHECK(g.in_degree(b) == 1);
  CHECK_THROWS_AS(g.at("X"), NotFoundError);
}

TEST_CASE("random references minus dangling ones become edges") {
  std::mt19937_64 rng(3);
  std::vector<PaperRecord> records;
  for (int i = 0; i < 100; ++i) records.push_back(rec("p" + std::to_string(i), 2000));
  std::set<std::pair<int, int>> used;
  std::size_t real = 0, dangling = 0;
  while (real < 460) {
    const int u = static_cast<int>(rng() % 100), v = static_cast<int>(rng() % 100);
    if (u == v || !used.emplace(u, v).second) continue;
    records[static_cast<std::size_t>(u)].references.push_back("p" + std::to_string(v));
    ++real;
  }
  while (dangling < 40) {
    records[rng() % 100].references.push_back("ghost" + std::to_string(dangling));
    ++dangling;
  }
  const auto g = build_graph(records);
  CHECK(g.edge_count() == 460);
  CHECK(g.dangling_references() == 40);
}

TEST_CASE("strict chronology drops citations to newer papers") {
  const std::vector<PaperRecord> records{rec("old", 1990, {"new"}), rec("new", 2000)};
  CHECK(build_graph(records).edge_count() == 1);
  CHECK(build_graph(records).anachronistic_edges() == 1);
  GraphOptions strict;
  strict.strict_chronology = true;
  CHECK(build_graph(records, strict).edge_count() == 0);
}

TEST_CASE("node ids do not depend on record order") {
  const auto g1 = build_graph({rec("b", 1990), rec("a", 2000, {"b"})});
  const auto g2 = build_graph({rec("a", 2000, {"b"}), rec("b", 1990)});
  CHECK(g1.at("a") == g2.at("a"));
  CHECK(g1.edges() == g2.edges());
}

TEST_CASE("citation series") {
  const auto g = build_graph({rec("t", 1990), rec("c1", 1991, {"t"}), rec("c2", 1991, {"t"}),
                              rec("c3", 1993, {"t"}), rec("lonely", 1990)});
  const auto s = extract_series(g, "t");
  REQUIRE(s.counts.size() == 20);
  CHECK(s.counts[1] == 2);
  CHECK(s.counts[3] == 1);
  CHECK(s.total() == 3);
  CHECK(extract_series(g, "lonely").counts == std::vector<int>(20, 0));
  CHECK(observed_series(g, g.at("t"), 1995, 20).counts.size() == 6);
  CHECK_THROWS_AS(extract_series(g, "nope"), NotFoundError);
}

TEST_CASE("series sums equal in-degree within the window") {
  std::mt19937_64 rng(9);
  std::vector<PaperRecord> records;
  for (int i = 0; i < 200; ++i) records.push_back(rec("n" + std::to_string(i), 1980 + i / 10));
  for (int u = 0; u < 200; ++u) {
    for (int v = 0; v < u; ++v) {
      if (rng() % 20 == 0) records[static_cast<std::size_t>(u)].references.push_back("n" + std::to_string(v));
    }
  }
  const auto g = build_graph(records);
  for (NodeId n = 0; n < g.node_count(); ++n) {
    long within = 0;
    for (auto c : g.citations(n)) within += (g.year(c) - g.year(n) < 20) ? 1 : 0;
    CHECK(extract_series(g, n).total() == within);
  }
}
