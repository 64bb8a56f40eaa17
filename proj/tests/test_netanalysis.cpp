#include <cmath>
#include <random>
#include <set>

#include "citeprof/error.hpp"
#include "citeprof/netanalysis.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace citeprof;
using namespace citeprof::netanalysis;
using doctest::Approx;
using ingest::PaperRecord;

namespace {

PaperRecord paper(std::string id, int year, std::vector<std::string> refs = {}, std::vector<std::string> authors = {}) {
  PaperRecord r;
  r.id = std::move(id);
  r.year = year;
  r.references = std::move(refs);
  r.authors = std::move(authors);
  return r;
}

profile::LabeledPaper labeled(ingest::NodeId node, Category c, long total) {
  profile::LabeledPaper p;
  p.node = node;
  p.paper_id = "p" + std::to_string(node);
  p.result.category = c;
  p.result.total_window = total;
  return p;
}

std::vector<ingest::CitationSeries> fixture_series() {
  std::vector<ingest::CitationSeries> out;
  for (const auto& f : fixtures::six_profiles()) out.push_back(f.series);
  return out;
}

}  // namespace

TEST_CASE("bucket boundaries") {
  const std::vector<long> totals{11, 12, 14, 20, 21, 22, 30, 40, 50, 60, 70, 80};
  const auto b = default_bucket_boundaries(totals);
  REQUIRE(b.size() >= 4);
  CHECK(b[0] == BucketRange{11, 12});
  CHECK(b[1] == BucketRange{13, 15});
  CHECK(b[2] == BucketRange{16, 19});
  CHECK(b[3].lo == 20);
  CHECK(b.back().hi == 80);
  for (std::size_t i = 1; i < b.size(); ++i) CHECK(b[i].lo == b[i - 1].hi + 1);
}

TEST_CASE("bucket histogram rows") {
  profile::CorpusLabels labels;
  for (ingest::NodeId i = 0; i < 5; ++i) labels.papers.push_back(labeled(i, Category::MonDec, 11));
  const auto h = citation_bucket_histogram(labels);
  CHECK(h.probability[Category::MonDec][0] == 1.0);
  CHECK(h.empty_row(Category::PeakLate));

  profile::CorpusLabels spread;
  ingest::NodeId n = 0;
  for (long t : {11L, 13L, 16L, 25L, 60L, 90L, 200L}) {
    for (int k = 0; k < 4; ++k) spread.papers.push_back(labeled(n++, Category::PeakInit, t));
    spread.papers.push_back(labeled(n++, Category::MonIncr, t < 60 ? 11 : 200));
  }
  spread.papers.push_back(labeled(n++, Category::Oth, 3));
  const auto s = citation_bucket_histogram(spread);
  CHECK(s.excluded == 1);
  for (auto c : {Category::PeakInit, Category::MonIncr}) {
    double sum = 0.0;
    for (double p : s.probability[c]) sum += p;
    CHECK(sum == Approx(1.0));
  }
  CHECK(s.probability[Category::MonIncr].back() > s.probability[Category::PeakInit].back());
}

TEST_CASE("venue and year composition") {
  const auto g = ingest::build_graph({paper("a", 2000), paper("b", 2000), paper("c", 2000), paper("d", 2000)});
  profile::CorpusLabels labels;
  for (ingest::NodeId i = 0; i < 4; ++i) labels.papers.push_back(labeled(i, Category::MonDec, 0));
  auto rows = venue_year_composition(labels, g);
  CHECK(rows[Category::MonDec].mean_year == 2000.0);
  CHECK(rows[Category::MonDec].sd_year == 0.0);
  CHECK(rows[Category::MonDec].venue_known == 0);

  std::vector<PaperRecord> recs{paper("a", 1990), paper("b", 1992), paper("c", 1994), paper("d", 1996)};
  for (int i = 0; i < 3; ++i) recs[static_cast<std::size_t>(i)].venue = ingest::VenueType::conference;
  recs[3].venue = ingest::VenueType::journal;
  const auto g2 = ingest::build_graph(recs);
  rows = venue_year_composition(labels, g2);
  CHECK(rows[Category::MonDec].pct_conference == Approx(75.0));
  CHECK(rows[Category::MonDec].pct_journal == Approx(25.0));
  CHECK(rows[Category::MonDec].mean_year == Approx(1993.0));
  CHECK(rows[Category::MonDec].sd_year == Approx(std::sqrt(5.0)));
}

TEST_CASE("self-citation stripping") {
  const auto g = ingest::build_graph({paper("a", 2000, {"b", "c"}, {"x", "y"}), paper("b", 1995, {}, {"x"}),
                                      paper("c", 1990, {}, {"z"})});
  const auto s = strip_self_citations(g);
  REQUIRE(s.removed.size() == 1);
  CHECK(s.removed[0].citing == "a");
  CHECK(s.removed[0].cited == "b");
  CHECK(s.removed[0].age == 5);
  CHECK(s.graph.edge_count() == 1);
  CHECK(strip_self_citations(s.graph).removed.empty());

  const auto anon = ingest::build_graph({paper("a", 2000, {"b"}), paper("b", 1995)});
  CHECK_FALSE(has_authors(anon));
  CHECK_THROWS_AS(strip_self_citations(anon), CapabilityError);
}

TEST_CASE("planted self-citations match a pairwise scan") {
  const auto planted = fixtures::planted_self_citations(150, 0.10, 5);
  const auto g = ingest::build_graph(planted.records);
  std::set<std::pair<std::string, std::string>> scan;
  for (auto [u, v] : g.edges()) {
    const auto& a = g.record(u).authors;
    const auto& b = g.record(v).authors;
    for (const auto& x : a) {
      if (std::find(b.begin(), b.end(), x) != b.end()) scan.emplace(g.id(u), g.id(v));
    }
  }
  std::set<std::pair<std::string, std::string>> removed;
  for (const auto& e : strip_self_citations(g).removed) removed.emplace(e.citing, e.cited);
  CHECK(removed == scan);
  CHECK(removed == planted.planted);
}

TEST_CASE("confusion without self-citations is the identity") {
  auto recs = fixtures::records_for(fixture_series());
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].authors = {"author" + std::to_string(i)};
  const auto g = ingest::build_graph(recs);
  const auto rep = self_citation_confusion(g, {}, default_threshold_sweep());
  REQUIRE(rep.matrices.size() == 5);
  CHECK(rep.matrices.front().threshold == 10);
  CHECK(rep.matrices.back().threshold == 14);
  CHECK(rep.removed_edges == 0);
  for (const auto& m : rep.matrices) {
    for (auto from : kAllCategories) {
      if (m.row_papers[from] == 0) continue;
      for (auto to : kAllCategories) CHECK(m.fraction[from][to] == (from == to ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("self-citation timing") {
  const auto g = ingest::build_graph(fixtures::mondec_self_cited(0.8));
  const auto rep = self_citation_confusion(g, {}, default_threshold_sweep());
  CHECK(rep.removed_edges == 32);
  REQUIRE(rep.timing[Category::MonDec].size() == kTimingBins);
  double sum = 0.0;
  for (double f : rep.timing[Category::MonDec]) sum += f;
  CHECK(sum == Approx(1.0));
  CHECK(rep.timing_edges[Category::MonDec] == 32);
  CHECK(rep.matrices.front().fraction[Category::MonDec][Category::Oth] == 1.0);
}

TEST_CASE("k-shell small graphs") {
  const auto cycle = ingest::build_graph({paper("a", 2000, {"b"}), paper("b", 2000, {"c"}), paper("c", 2000, {"d"}),
                                          paper("d", 2000, {"a"})});
  const auto s = kshell_decompose(cycle);
  CHECK(s.shell == std::vector<int>(4, 1));
  CHECK(s.max_shell == 1);

  std::vector<PaperRecord> star{paper("hub", 1990)};
  for (int i = 0; i < 10; ++i) star.push_back(paper("leaf" + std::to_string(i), 2000, {"hub"}));
  const auto g = ingest::build_graph(star);
  const auto t = kshell_decompose(g);
  CHECK(t.shell[g.at("hub")] == 1);
  CHECK(t.broad_shell[g.at("hub")] == 1);
  CHECK(t.shell[g.at("leaf3")] == 0);
  CHECK(t.broad_shell[g.at("leaf3")] == 0);
}

TEST_CASE("broad shells") {
  CHECK(broad_shell_of(0, 12) == 0);
  CHECK(broad_shell_of(1, 12) == 1);
  CHECK(broad_shell_of(2, 12) == 1);
  CHECK(broad_shell_of(3, 12) == 2);
  CHECK(broad_shell_of(12, 12) == 6);
  CHECK(broad_shell_of(13, 13) == 6);
  CHECK(broad_shell_of(4, 4) == 4);
}

TEST_CASE("k-shell ignores node order") {
  std::mt19937_64 rng(12);
  std::vector<PaperRecord> a, b;
  for (int i = 0; i < 60; ++i) {
    a.push_back(paper("n" + std::to_string(100 + i), 2000));
    b.push_back(paper("m" + std::to_string(100 + (i * 37) % 60), 2000));
  }
  for (int u = 0; u < 60; ++u) {
    for (int v = 0; v < 60; ++v) {
      if (u != v && rng() % 10 == 0) {
        a[static_cast<std::size_t>(u)].references.push_back("n" + std::to_string(100 + v));
        b[static_cast<std::size_t>(u)].references.push_back("m" + std::to_string(100 + (v * 37) % 60));
        b[static_cast<std::size_t>(u)].id = "m" + std::to_string(100 + (u * 37) % 60);
      }
    }
  }
  const auto ga = ingest::build_graph(a);
  const auto gb = ingest::build_graph(b);
  const auto sa = kshell_decompose(ga);
  const auto sb = kshell_decompose(gb);
  for (int i = 0; i < 60; ++i) {
    CHECK(sa.shell[ga.at("n" + std::to_string(100 + i))] == sb.shell[gb.at("m" + std::to_string(100 + (i * 37) % 60))]);
  }
}

TEST_CASE("core-periphery composition") {
  std::mt19937_64 rng(13);
  std::vector<PaperRecord> recs;
  for (int i = 0; i < 80; ++i) recs.push_back(paper("p" + std::to_string(1000 + i), 1990));
  for (int u = 0; u < 80; ++u) {
    for (int v = 0; v < 80; ++v) {
      if (u != v && rng() % 8 == 0) recs[static_cast<std::size_t>(u)].references.push_back(recs[static_cast<std::size_t>(v)].id);
    }
  }
  const auto g = ingest::build_graph(recs);
  profile::CorpusLabels labels;
  for (ingest::NodeId i = 0; i < 80; ++i) {
    labels.papers.push_back(labeled(i, kAllCategories[i % 6], 0));
    labels.papers.back().paper_id = g.id(i);
  }
  const std::vector<int> years{1995, 2000};
  const auto rows = core_periphery_evolution(g, labels, years);
  REQUIRE_FALSE(rows.empty());
  std::map<std::pair<int, int>, double> sums;
  std::map<std::tuple<int, Category>, double> by_shell_cat[2];
  for (const auto& r : rows) {
    sums[{r.year, r.broad_shell}] += r.fraction;
    by_shell_cat[r.year == 2000][{r.broad_shell, r.category}] = r.fraction;
  }
  for (const auto& [key, s] : sums) CHECK(s == Approx(1.0));
  CHECK(by_shell_cat[0] == by_shell_cat[1]);
}

TEST_CASE("stability flows") {
  const auto series = fixture_series();
  const std::vector<int> horizons{10, 15, 20};
  const auto f = stability_flows(series, {}, horizons);
  REQUIRE(f.transitions.size() == 2);
  const auto mondec = std::find(f.papers.begin(), f.papers.end(), "mon-dec") - f.papers.begin();
  for (std::size_t h = 0; h < 3; ++h) CHECK(f.labels[h][static_cast<std::size_t>(mondec)] == Category::MonDec);
  for (const auto& t : f.transitions) {
    std::size_t total = 0;
    for (auto a : kAllCategories) {
      for (auto b : kAllCategories) total += t.counts[a][b];
    }
    CHECK(total == series.size());
  }

  // The same truncated series at every horizon flows along the diagonal.
  std::vector<ingest::CitationSeries> flat{{"x", 1980, std::vector<int>(20, 3)}};
  const auto d = stability_flows(flat, {}, horizons);
  for (const auto& t : d.transitions) {
    for (auto a : kAllCategories) {
      for (auto b : kAllCategories) {
        if (a != b) CHECK(t.counts[a][b] == 0);
      }
    }
  }

  const auto cfg = horizon_config({}, 15);
  CHECK(cfg.oth_citation_threshold == 15);
  CHECK(cfg.min_history_years == 15);
  CHECK(cfg.max_window_years == 15);
}

TEST_CASE("peak statistics") {
  const auto two = fixtures::six_profiles()[1].series;
  auto second = two;
  second.paper_id = "peak-mul-2";
  const auto g = ingest::build_graph(fixtures::records_for({two, second}));
  const auto labels = profile::classify_corpus(g);
  const auto stats = peakmul_statistics(labels.papers);
  CHECK(stats.peakmul_papers == 2);
  CHECK(stats.fraction_two_peaks == 1.0);
  REQUIRE(stats.peakmul_by_rank.size() == 2);
  CHECK(stats.peakmul_by_rank[0].papers == 2);

  std::vector<int> counts(20, 0);
  for (int i = 2; i <= 6; ++i) counts[static_cast<std::size_t>(i)] = 5;
  auto recs = fixtures::records_for({{"init", 1980, counts}});
  recs.push_back(paper("zz-last", 1999));
  const auto gi = ingest::build_graph(recs);
  const auto li = profile::classify_corpus(gi);
  REQUIRE(li.find("init"));
  REQUIRE(li.find("init")->result.category == Category::PeakInit);
  const auto si = peakmul_statistics(li.papers);
  CHECK(si.single_peak[Category::PeakInit].papers == 1);
  CHECK(si.single_peak[Category::PeakInit].mean_position == 4.0);
  CHECK(si.single_peak[Category::PeakInit].mean_height == Approx(5.0));
}
