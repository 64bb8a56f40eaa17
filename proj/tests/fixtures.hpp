#pragma once

// Hand-built series and planted corpora shared by the unit and acceptance
// tests.

#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "citeprof/category.hpp"
#include "citeprof/ingest.hpp"

namespace fixtures {

using citeprof::Category;
using citeprof::ingest::CitationSeries;
using citeprof::ingest::PaperRecord;

struct LabeledSeries {
  Category expected;
  CitationSeries series;
};

// One 20-year series per category.
inline std::vector<LabeledSeries> six_profiles() {
  return {
      {Category::PeakInit, {"peak-init", 1990, {2, 5, 8, 12, 9, 7, 5, 3, 2, 2, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0}}},
      {Category::PeakMul, {"peak-mul", 1990, {1, 3, 6, 9, 12, 9, 5, 2, 1, 1, 2, 5, 9, 12, 9, 5, 2, 1, 1, 1}}},
      {Category::PeakLate, {"peak-late", 1990, {0, 1, 1, 2, 2, 3, 4, 6, 8, 10, 12, 10, 8, 6, 4, 3, 2, 2, 1, 1}}},
      {Category::MonDec, {"mon-dec", 1990, {6, 10, 8, 5, 3, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0}}},
      {Category::MonIncr, {"mon-incr", 1990, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20}}},
      {Category::Oth, {"oth", 1990, {1, 0, 1, 0, 0, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}}},
  };
}

// Records whose citation graph reproduces `series`: one citing paper per
// citation, dated pub_year + age. Citing ids are prefixed by the series id.
inline std::vector<PaperRecord> records_for(const std::vector<CitationSeries>& series) {
  std::vector<PaperRecord> out;
  for (const auto& s : series) {
    PaperRecord target;
    target.id = s.paper_id;
    target.year = s.pub_year;
    out.push_back(target);
    int k = 0;
    for (std::size_t age = 0; age < s.counts.size(); ++age) {
      for (int i = 0; i < s.counts[age]; ++i) {
        PaperRecord citing;
        citing.id = s.paper_id + "~c" + std::to_string(k++);
        citing.year = s.pub_year + static_cast<int>(age);
        citing.references = {s.paper_id};
        out.push_back(citing);
      }
    }
  }
  return out;
}

struct PlantedSelfCitations {
  std::vector<PaperRecord> records;
  std::set<std::pair<std::string, std::string>> planted;  // (citing, cited)
  std::size_t edges = 0;
};

// `papers` papers over 1980..1999, each with a private author. A `fraction`
// of the edges get a fresh author token added to both endpoints.
inline PlantedSelfCitations planted_self_citations(std::size_t papers, double fraction, unsigned seed) {
  std::mt19937_64 rng(seed);
  PlantedSelfCitations out;
  out.records.resize(papers);
  for (std::size_t i = 0; i < papers; ++i) {
    auto& r = out.records[i];
    r.id = "p" + std::to_string(1000 + i);
    r.year = 1980 + static_cast<int>(i * 20 / papers);
    r.authors = {"a" + std::to_string(i)};
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < papers; ++i) {
    std::vector<std::size_t> older;
    for (std::size_t j = 0; j < i; ++j) {
      if (out.records[j].year < out.records[i].year) older.push_back(j);
    }
    std::shuffle(older.begin(), older.end(), rng);
    const std::size_t want = std::min<std::size_t>(older.size(), 2 + rng() % 5);
    for (std::size_t k = 0; k < want; ++k) {
      out.records[i].references.push_back(out.records[older[k]].id);
      edges.emplace_back(i, older[k]);
    }
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto n_planted = static_cast<std::size_t>(fraction * static_cast<double>(edges.size()));
  for (std::size_t k = 0; k < n_planted; ++k) {
    const auto [u, v] = edges[k];
    const std::string token = "shared" + std::to_string(k);
    out.records[u].authors.push_back(token);
    out.records[v].authors.push_back(token);
    out.planted.emplace(out.records[u].id, out.records[v].id);
  }
  out.edges = edges.size();
  return out;
}

// A MonDec-shaped paper of 1980 whose citations are `self_share` self-cites
// (citing papers list the paper's author), observed through 2000.
inline std::vector<PaperRecord> mondec_self_cited(double self_share) {
  const std::vector<int> counts{6, 10, 8, 5, 3, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0};
  std::vector<PaperRecord> out;
  PaperRecord target;
  target.id = "target";
  target.year = 1980;
  target.authors = {"owner"};
  out.push_back(target);
  int total = 0;
  for (int c : counts) total += c;
  const int self = static_cast<int>(self_share * total + 0.5);
  int k = 0;
  for (std::size_t age = 0; age < counts.size(); ++age) {
    for (int i = 0; i < counts[age]; ++i, ++k) {
      PaperRecord citing;
      citing.id = "cite" + std::to_string(100 + k);
      citing.year = 1980 + static_cast<int>(age);
      // Spread self-citations evenly over the citation sequence.
      const bool is_self = (k * self) / total != ((k + 1) * self) / total;
      citing.authors = {is_self ? "owner" : "other" + std::to_string(k)};
      citing.references = {"target"};
      out.push_back(citing);
    }
  }
  // Extends the observation window to 2000.
  PaperRecord last;
  last.id = "zz-last";
  last.year = 2000;
  last.authors = {"late"};
  out.push_back(last);
  return out;
}

}  // namespace fixtures
