#pragma once

// Citation-profile classification: moving-average smoothing, max
// normalization, peak detection and the six-way category decision.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "citeprof/category.hpp"
#include "citeprof/ingest.hpp"

namespace citeprof::profile {

struct ClassifierConfig {
  int min_history_years = 10;
  int max_window_years = 20;
  // Papers with at most this many citations over the first min_history_years
  // are Oth.
  int oth_citation_threshold = 10;
  int smoothing_window = 5;
  // Relative rule: a peak must reach this fraction of the tallest peak.
  double peak_height_fraction = 0.75;
  // Absolute rule on the normalized series.
  double min_peak_height = 0.75;
  // Peaks at most this many years apart are merged.
  int peak_min_separation = 2;
  int early_peak_bound = 5;
  double monotone_tolerance = 1e-9;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct SmoothedSeries {
  std::vector<double> values;
  int window = 1;
};

struct NormalizedSeries {
  std::vector<double> values;
};

struct Peak {
  int position = 0;
  double height = 0.0;

  bool operator==(const Peak&) const = default;
};

/// Peaks sorted by position.
struct PeakSet {
  std::vector<Peak> peaks;

  std::size_t size() const { return peaks.size(); }
  bool empty() const { return peaks.empty(); }
};

/// Centered moving average; windows are clipped at the series ends. Throws
/// std::invalid_argument for an even or non-positive window.
SmoothedSeries smooth(std::span<const double> values, int window);
SmoothedSeries smooth(const ingest::CitationSeries& series, int window);

/// Divides by the maximum; an all-zero series is returned unchanged.
NormalizedSeries normalize(std::span<const double> values);
inline NormalizedSeries normalize(const SmoothedSeries& s) { return normalize(s.values); }

/// Interior local maxima, one per plateau (positioned at the plateau's first
/// index). When `include_endpoints` is set, a maximal run touching either end
/// of the series that is higher than its single neighbour also counts.
std::vector<int> local_maxima(std::span<const double> values, bool include_endpoints = false);

/// Applies the peak rules to a set of candidate positions: absolute height,
/// merge of peaks closer than or equal to the separation (taller wins, ties
/// go to the earlier), then the relative-height rule.
PeakSet filter_peaks(std::span<const double> values, std::span<const int> candidates,
                     const ClassifierConfig& cfg);

/// Interior peaks of a normalized series.
PeakSet detect_peaks(const NormalizedSeries& series, const ClassifierConfig& cfg);

struct Classification {
  Category category = Category::Oth;
  // Qualifying peaks used by the decision, endpoint maxima included.
  PeakSet peaks;
  long total_first_window = 0;
  // Raw citations over the classified window.
  long total_window = 0;
  std::size_t window_length = 0;
  std::vector<double> smoothed;
  std::vector<double> normalized;
  // Short tag naming the decision branch taken.
  std::string_view rule;
};

/// Classifies one series. The series is truncated to max_window_years.
/// Throws IneligibleError when shorter than min_history_years.
Classification classify(const ingest::CitationSeries& series, const ClassifierConfig& cfg = {});

struct Census {
  PerCategory<std::size_t> counts;
  std::size_t ineligible = 0;

  std::size_t labeled() const;
  double fraction(Category c) const;
};

struct LabeledPaper {
  ingest::NodeId node = 0;
  std::string paper_id;
  Classification result;
};

struct CorpusLabels {
  // Ordered by node id (i.e. by paper id).
  std::vector<LabeledPaper> papers;
  std::vector<std::string> ineligible;
  Census census;

  const LabeledPaper* find(std::string_view paper_id) const;
};

struct CorpusOptions {
  // Last observed year; defaults to the graph's last publication year.
  std::optional<int> observation_end;
  unsigned threads = 1;
};

/// Labels every paper with at least min_history_years of observed history.
CorpusLabels classify_corpus(const ingest::CitationGraph& graph, const ClassifierConfig& cfg = {},
                             const CorpusOptions& opts = {});

}  // namespace citeprof::profile
