#pragma once

// Citation belts (10th percentile / mean / 90th percentile per age) and
// in-degree distributions for model-versus-data comparison.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "citeprof/category.hpp"
#include "citeprof/ingest.hpp"

namespace citeprof::report {

/// Nearest-rank percentile of ascending `sorted`: the value at 1-based rank
/// ceil(p * n). `p` must be in (0, 1] and `sorted` non-empty.
double percentile_nearest_rank(std::span<const double> sorted, double p);

struct BeltPoint {
  double q1 = 0.0;
  double mean = 0.0;
  double q3 = 0.0;
  std::size_t papers = 0;
};

struct CitationBelt {
  std::vector<BeltPoint> ages;
  std::size_t papers = 0;
  bool low_sample = false;
};

struct BeltOptions {
  double lower = 0.10;
  double upper = 0.90;
  // The belt stops at the first age observed by fewer series.
  std::size_t min_papers_per_age = 5;
  // Belts over fewer series are flagged low-sample.
  std::size_t low_sample_below = 10;
};

/// Belt over normalized series aligned at publication (index = age).
CitationBelt citation_belt(std::span<const std::vector<double>> series, const BeltOptions& opts = {});

struct DegreeDistribution {
  // (in-degree, fraction of papers), ascending in-degree.
  std::vector<std::pair<int, double>> pmf;
  std::size_t papers = 0;

  bool empty() const { return pmf.empty(); }
  /// P(degree <= x).
  double cdf(int x) const;
};

DegreeDistribution indegree_distribution(const ingest::CitationGraph& g,
                                         std::span<const ingest::NodeId> nodes);

using LabelFn = std::function<std::optional<Category>(ingest::NodeId)>;

/// One distribution per category over the labeled nodes.
PerCategory<DegreeDistribution> indegree_distributions(const ingest::CitationGraph& g,
                                                       const LabelFn& label);

struct LogBin {
  int lo = 0;  // inclusive
  int hi = 0;  // exclusive
  double fraction = 0.0;
};

/// Degree 0 in its own bin, then [base^(i-1), base^i).
std::vector<LogBin> log_binned(const DegreeDistribution& d, double base = 2.0);

struct Divergence {
  double ks = 0.0;  // Kolmogorov-Smirnov statistic
  double tv = 0.0;  // total variation on shared log bins
};

/// Throws std::invalid_argument when either distribution is empty.
Divergence compare_distributions(const DegreeDistribution& a, const DegreeDistribution& b,
                                 double log_base = 2.0);

/// Two-sample KS critical value at significance `alpha` (asymptotic).
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

}  // namespace citeprof::report
