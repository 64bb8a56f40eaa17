#pragma once

// Corpus-level analyses over labeled citation graphs: citation-bucket
// histograms, venue/year composition, self-citation migration, category
// stability across horizons, k-shell structure and peak statistics.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "citeprof/category.hpp"
#include "citeprof/ingest.hpp"
#include "citeprof/profile.hpp"

namespace citeprof::netanalysis {

template <typename T>
using CategoryMatrix = PerCategory<PerCategory<T>>;

struct BucketRange {
  long lo = 0;  // inclusive
  long hi = 0;  // inclusive
  bool operator==(const BucketRange&) const = default;
};

/// 11-12, 13-15, 16-19, then [20, max] split at the 25/50/75 nearest-rank
/// quantiles of the totals that reach 20. Empty sub-ranges are dropped.
std::vector<BucketRange> default_bucket_boundaries(std::span<const long> totals);

struct CitationBuckets {
  std::vector<BucketRange> boundaries;
  // P(bucket | category); a zero row when the category has no counted paper.
  PerCategory<std::vector<double>> probability;
  PerCategory<std::size_t> papers;
  // Papers below the lowest boundary (or above the highest), not counted.
  std::size_t excluded = 0;

  bool empty_row(Category c) const { return papers[c] == 0; }
};

/// Buckets papers by total citations over their classification window.
/// Uses default_bucket_boundaries when `boundaries` is empty.
CitationBuckets citation_bucket_histogram(const profile::CorpusLabels& labels,
                                          std::optional<std::vector<BucketRange>> boundaries = {});

struct VenueYearRow {
  std::size_t papers = 0;
  double mean_year = 0.0;
  double sd_year = 0.0;  // population standard deviation
  // Percentages over the papers whose venue type is known.
  std::size_t venue_known = 0;
  double pct_conference = 0.0;
  double pct_journal = 0.0;
};

PerCategory<VenueYearRow> venue_year_composition(const profile::CorpusLabels& labels,
                                                 const ingest::CitationGraph& graph);

struct RemovedEdge {
  std::string citing;
  std::string cited;
  int age = 0;  // citing year - cited year
};

struct StrippedGraph {
  ingest::CitationGraph graph;
  std::vector<RemovedEdge> removed;  // ordered by (citing, cited)
};

/// True when at least one record lists an author.
bool has_authors(const ingest::CitationGraph& graph);

/// Removes every edge whose endpoints share an author. Throws CapabilityError
/// when no record carries authors.
StrippedGraph strip_self_citations(const ingest::CitationGraph& graph);

inline constexpr std::size_t kTimingBins = 21;  // ages 0..19, then 20+

struct ThresholdConfusion {
  int threshold = 0;
  // Row i: papers labeled i before stripping, split by their label after.
  CategoryMatrix<double> fraction;
  PerCategory<std::size_t> row_papers;
};

struct SelfCitationReport {
  std::vector<ThresholdConfusion> matrices;
  // Per category of the cited paper (labeled at cfg's threshold), the share
  // of its self-citations by age.
  PerCategory<std::vector<double>> timing;
  PerCategory<std::size_t> timing_edges;
  std::size_t removed_edges = 0;
};

std::vector<int> default_threshold_sweep();  // 10..14

/// Labels the original and stripped graphs at each threshold of the sweep.
/// Both classifications observe up to the original graph's last year unless
/// `opts.observation_end` is set.
SelfCitationReport self_citation_confusion(const ingest::CitationGraph& graph,
                                           const profile::ClassifierConfig& cfg,
                                           std::span<const int> thresholds,
                                           const profile::CorpusOptions& opts = {});

struct ShellAssignment {
  // Per node id. Shell 0: no inbound citations.
  std::vector<int> shell;
  // 1..6 for shell >= 1, 0 otherwise.
  std::vector<int> broad_shell;
  int max_shell = 0;
};

/// Band 1..6 of `shell` when [1, max_shell] is cut into six equal-width
/// bands, the last absorbing the remainder.
int broad_shell_of(int shell, int max_shell);

/// Peeling on in-degree: at stage k nodes whose remaining in-degree is at
/// most k are removed repeatedly; a removed node gets shell k.
ShellAssignment kshell_decompose(const ingest::CitationGraph& graph);

struct CoreCompositionRow {
  int year = 0;
  int broad_shell = 0;
  Category category = Category::Oth;
  std::size_t papers = 0;
  double fraction = 0.0;  // within (year, broad_shell)
};

/// Shell composition of the papers labeled in `labels` within the induced
/// subgraph of each year. Shell-0 papers are left out.
std::vector<CoreCompositionRow> core_periphery_evolution(const ingest::CitationGraph& graph,
                                                         const profile::CorpusLabels& labels,
                                                         std::span<const int> years);

struct StabilityOptions {
  std::vector<int> horizons{10, 15, 20};
  // Last observed year; defaults to the graph's last publication year.
  std::optional<int> observation_end;
};

struct Transition {
  int from_horizon = 0;
  int to_horizon = 0;
  CategoryMatrix<std::size_t> counts;
};

struct StabilityFlow {
  std::vector<int> horizons;
  std::vector<std::string> papers;
  // labels[h][i]: category of papers[i] at horizons[h].
  std::vector<std::vector<Category>> labels;
  std::vector<Transition> transitions;  // consecutive horizons
};

/// Classifier settings for a series cut at `horizon` years: the window is the
/// horizon and the Oth threshold keeps its per-year rate.
profile::ClassifierConfig horizon_config(const profile::ClassifierConfig& cfg, int horizon);

/// Classifies each series at every horizon. Series shorter than the largest
/// horizon are skipped.
StabilityFlow stability_flows(std::span<const ingest::CitationSeries> series,
                              const profile::ClassifierConfig& cfg,
                              std::span<const int> horizons);
StabilityFlow stability_flows(const ingest::CitationGraph& graph, const profile::ClassifierConfig& cfg,
                              const StabilityOptions& opts = {});

struct PeakRankStats {
  std::size_t papers = 0;
  double mean_height = 0.0;    // citations per year on the smoothed series
  double mean_position = 0.0;  // years after publication
};

struct PeakStatistics {
  std::size_t peakmul_papers = 0;
  double fraction_two_peaks = 0.0;
  // Index r: the (r+1)-th peak of PeakMul papers having at least r+1 peaks.
  std::vector<PeakRankStats> peakmul_by_rank;
  // Papers of each category with exactly one peak.
  PerCategory<PeakRankStats> single_peak;
};

PeakStatistics peakmul_statistics(std::span<const profile::LabeledPaper> papers);

}  // namespace citeprof::netanalysis
