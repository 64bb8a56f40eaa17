#include "citeprof/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace citeprof::report {

double percentile_nearest_rank(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("percentile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile must be in (0, 1]");
  const auto n = static_cast<double>(sorted.size());
  // Guard against p * n landing a hair above an integer.
  auto rank = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

CitationBelt citation_belt(std::span<const std::vector<double>> series, const BeltOptions& opts) {
  CitationBelt belt;
  belt.papers = series.size();
  belt.low_sample = series.size() < opts.low_sample_below;
  std::size_t longest = 0;
  for (const auto& s : series) longest = std::max(longest, s.size());

  std::vector<double> column;
  for (std::size_t age = 0; age < longest; ++age) {
    column.clear();
    for (const auto& s : series) {
      if (age < s.size()) column.push_back(s[age]);
    }
    if (column.empty() || column.size() < opts.min_papers_per_age) break;
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    belt.ages.push_back({percentile_nearest_rank(column, opts.lower),
                         sum / static_cast<double>(column.size()),
                         percentile_nearest_rank(column, opts.upper), column.size()});
  }
  return belt;
}

double DegreeDistribution::cdf(int x) const {
  double acc = 0.0;
  for (const auto& [d, f] : pmf) {
    if (d > x) break;
    acc += f;
  }
  return std::min(acc, 1.0);
}

DegreeDistribution indegree_distribution(const ingest::CitationGraph& g,
                                         std::span<const ingest::NodeId> nodes) {
  std::map<int, std::size_t> counts;
  for (auto n : nodes) ++counts[static_cast<int>(g.in_degree(n))];
  DegreeDistribution d;
  d.papers = nodes.size();
  for (const auto& [deg, c] : counts) {
    d.pmf.emplace_back(deg, static_cast<double>(c) / static_cast<double>(nodes.size()));
  }
  return d;
}

PerCategory<DegreeDistribution> indegree_distributions(const ingest::CitationGraph& g,
                                                       const LabelFn& label) {
  PerCategory<std::vector<ingest::NodeId>> groups;
  for (ingest::NodeId n = 0; n < g.node_count(); ++n) {
    if (auto c = label(n)) groups[*c].push_back(n);
  }
  PerCategory<DegreeDistribution> out;
  for (auto c : kAllCategories) out[c] = indegree_distribution(g, groups[c]);
  return out;
}

namespace {

std::size_t bin_of(int degree, double base) {
  if (degree <= 0) return 0;
  // Smallest i >= 1 with degree < base^i.
  std::size_t i = 1;
  double upper = base;
  while (static_cast<double>(degree) >= upper) {
    upper *= base;
    ++i;
  }
  return i;
}

int bin_lo(std::size_t i, double base) {
  if (i == 0) return 0;
  return static_cast<int>(std::ceil(std::pow(base, static_cast<double>(i - 1)) - 1e-9));
}

}  // namespace

std::vector<LogBin> log_binned(const DegreeDistribution& d, double base) {
  if (!(base > 1.0)) throw std::invalid_argument("log-bin base must exceed 1");
  std::vector<LogBin> bins;
  for (const auto& [deg, f] : d.pmf) {
    const auto i = bin_of(deg, base);
    if (bins.size() <= i) {
      for (std::size_t j = bins.size(); j <= i; ++j) bins.push_back({bin_lo(j, base), j == 0 ? 1 : bin_lo(j + 1, base), 0.0});
    }
    bins[i].fraction += f;
  }
  return bins;
}

Divergence compare_distributions(const DegreeDistribution& a, const DegreeDistribution& b,
                                 double log_base) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cannot compare an empty distribution");
  Divergence out;
  // KS: the CDFs only change at support points of either distribution.
  std::vector<int> support;
  for (const auto& [d, f] : a.pmf) support.push_back(d);
  for (const auto& [d, f] : b.pmf) support.push_back(d);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  double fa = 0.0, fb = 0.0;
  std::size_t ia = 0, ib = 0;
  for (int x : support) {
    while (ia < a.pmf.size() && a.pmf[ia].first <= x) fa += a.pmf[ia++].second;
    while (ib < b.pmf.size() && b.pmf[ib].first <= x) fb += b.pmf[ib++].second;
    out.ks = std::max(out.ks, std::abs(fa - fb));
  }

  auto ba = log_binned(a, log_base);
  auto bb = log_binned(b, log_base);
  const std::size_t nb = std::max(ba.size(), bb.size());
  double tv = 0.0;
  for (std::size_t i = 0; i < nb; ++i) {
    const double pa = i < ba.size() ? ba[i].fraction : 0.0;
    const double pb = i < bb.size() ? bb[i].fraction : 0.0;
    tv += std::abs(pa - pb);
  }
  out.tv = 0.5 * tv;
  return out;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

}  // namespace citeprof::report
