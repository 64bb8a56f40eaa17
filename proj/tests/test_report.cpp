#include <cmath>
#include <random>

#include "citeprof/report.hpp"
#include "doctest.h"

using namespace citeprof;
using namespace citeprof::report;
using doctest::Approx;

namespace {

DegreeDistribution from_samples(const std::vector<int>& xs) {
  std::map<int, std::size_t> counts;
  for (int x : xs) ++counts[x];
  DegreeDistribution d;
  d.papers = xs.size();
  for (auto [k, n] : counts) d.pmf.emplace_back(k, static_cast<double>(n) / static_cast<double>(xs.size()));
  return d;
}

}  // namespace

TEST_CASE("nearest-rank percentile") {
  const std::vector<double> v{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  CHECK(percentile_nearest_rank(v, 0.1) == 1);
  CHECK(percentile_nearest_rank(v, 0.9) == 9);
  CHECK(percentile_nearest_rank(v, 1.0) == 10);
  const std::vector<double> w{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  CHECK(percentile_nearest_rank(w, 0.1) == 2);
}

TEST_CASE("belts of identical series collapse") {
  const std::vector<double> s{0.2, 1.0, 0.6, 0.3, 0.1};
  const std::vector<std::vector<double>> many(100, s);
  const auto b = citation_belt(many);
  REQUIRE(b.ages.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(b.ages[i].q1 == s[i]);
    CHECK(b.ages[i].mean == Approx(s[i]));
    CHECK(b.ages[i].q3 == s[i]);
  }
  CHECK_FALSE(b.low_sample);
}

TEST_CASE("belt mean of two constant series") {
  std::vector<std::vector<double>> two{std::vector<double>(12, 0.2), std::vector<double>(12, 0.8)};
  BeltOptions opts;
  opts.min_papers_per_age = 1;
  const auto b = citation_belt(two, opts);
  REQUIRE(b.ages.size() == 12);
  for (const auto& p : b.ages) {
    CHECK(p.mean == Approx(0.5));
    CHECK(p.q1 <= p.q3);
  }
  CHECK(b.low_sample);
}

TEST_CASE("belt stops where coverage drops") {
  std::vector<std::vector<double>> series;
  for (int i = 0; i < 10; ++i) series.emplace_back(i < 4 ? 15 : 10, 0.5);
  const auto b = citation_belt(series);
  CHECK(b.ages.size() == 10);
}

TEST_CASE("in-degree distributions") {
  std::vector<ingest::PaperRecord> recs;
  for (int i = 0; i < 4; ++i) {
    ingest::PaperRecord r;
    r.id = "t" + std::to_string(i);
    r.year = 1990;
    r.category = Category::MonDec;
    recs.push_back(r);
  }
  for (int i = 0; i < 12; ++i) {
    ingest::PaperRecord r;
    r.id = "c" + std::to_string(i);
    r.year = 2000;
    r.references = {"t" + std::to_string(i % 4)};
    recs.push_back(r);
  }
  const auto g = ingest::build_graph(recs);
  const auto d = indegree_distributions(g, [&](ingest::NodeId n) { return g.record(n).category; });
  REQUIRE(d[Category::MonDec].pmf.size() == 1);
  CHECK(d[Category::MonDec].pmf[0] == std::pair<int, double>{3, 1.0});
  CHECK(d[Category::PeakInit].empty());
  CHECK(d[Category::MonDec].cdf(2) == 0.0);
  CHECK(d[Category::MonDec].cdf(3) == 1.0);
}

TEST_CASE("log binning") {
  const auto d = from_samples({0, 1, 2, 3, 4, 7, 8});
  const auto bins = log_binned(d);
  REQUIRE(bins.size() >= 4);
  CHECK(bins[0].lo == 0);
  CHECK(bins[0].hi == 1);
  double sum = 0.0;
  for (const auto& b : bins) sum += b.fraction;
  CHECK(sum == Approx(1.0));
}

TEST_CASE("distribution comparison") {
  const auto a = from_samples({1, 2, 2, 3, 5});
  CHECK(compare_distributions(a, a).ks == 0.0);
  CHECK(compare_distributions(a, a).tv == 0.0);
  const auto x = from_samples({1});
  const auto y = from_samples({100});
  CHECK(compare_distributions(x, y).ks == 1.0);
  CHECK(compare_distributions(x, y).tv == Approx(1.0));
  CHECK_THROWS_AS(compare_distributions(a, DegreeDistribution{}), std::invalid_argument);
}

TEST_CASE("KS between samples of one generator stays under the critical value") {
  std::mt19937_64 rng(21);
  std::geometric_distribution<int> geo(0.1);
  int below = 0;
  for (int t = 0; t < 100; ++t) {
    std::vector<int> s1(10000), s2(10000);
    for (auto& v : s1) v = geo(rng);
    for (auto& v : s2) v = geo(rng);
    below += compare_distributions(from_samples(s1), from_samples(s2)).ks < ks_critical_value(10000, 10000, 0.01);
  }
  CHECK(below >= 95);
}
