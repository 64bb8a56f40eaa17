#include "citeprof/netanalysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string_view>

#include "citeprof/error.hpp"
#include "citeprof/report.hpp"

namespace citeprof::netanalysis {

std::vector<BucketRange> default_bucket_boundaries(std::span<const long> totals) {
  std::vector<BucketRange> out{{11, 12}, {13, 15}, {16, 19}};
  std::vector<double> top;
  for (long t : totals) {
    if (t >= 20) top.push_back(static_cast<double>(t));
  }
  if (top.empty()) return out;
  std::sort(top.begin(), top.end());
  long lo = 20;
  for (double p : {0.25, 0.50, 0.75}) {
    const auto cut = static_cast<long>(report::percentile_nearest_rank(top, p));
    if (cut >= lo) {
      out.push_back({lo, cut});
      lo = cut + 1;
    }
  }
  const auto max = static_cast<long>(top.back());
  if (max >= lo) out.push_back({lo, max});
  return out;
}

CitationBuckets citation_bucket_histogram(const profile::CorpusLabels& labels,
                                          std::optional<std::vector<BucketRange>> boundaries) {
  CitationBuckets out;
  if (boundaries) {
    out.boundaries = std::move(*boundaries);
  } else {
    std::vector<long> totals;
    totals.reserve(labels.papers.size());
    for (const auto& p : labels.papers) totals.push_back(p.result.total_window);
    out.boundaries = default_bucket_boundaries(totals);
  }
  for (auto c : kAllCategories) out.probability[c].assign(out.boundaries.size(), 0.0);

  for (const auto& p : labels.papers) {
    const long total = p.result.total_window;
    auto it = std::find_if(out.boundaries.begin(), out.boundaries.end(),
                           [&](const BucketRange& b) { return total >= b.lo && total <= b.hi; });
    if (it == out.boundaries.end()) {
      ++out.excluded;
      continue;
    }
    const auto c = p.result.category;
    out.probability[c][static_cast<std::size_t>(it - out.boundaries.begin())] += 1.0;
    ++out.papers[c];
  }
  for (auto c : kAllCategories) {
    if (out.papers[c] == 0) continue;
    for (auto& v : out.probability[c]) v /= static_cast<double>(out.papers[c]);
  }
  return out;
}

PerCategory<VenueYearRow> venue_year_composition(const profile::CorpusLabels& labels,
                                                 const ingest::CitationGraph& graph) {
  PerCategory<VenueYearRow> out;
  PerCategory<double> year_sum;
  PerCategory<std::size_t> conference, journal;
  for (const auto& p : labels.papers) {
    const auto c = p.result.category;
    const auto& rec = graph.record(p.node);
    ++out[c].papers;
    year_sum[c] += rec.year;
    if (rec.venue == ingest::VenueType::conference) ++conference[c];
    if (rec.venue == ingest::VenueType::journal) ++journal[c];
  }
  for (auto c : kAllCategories) {
    auto& row = out[c];
    if (row.papers == 0) continue;
    row.mean_year = year_sum[c] / static_cast<double>(row.papers);
    row.venue_known = conference[c] + journal[c];
    if (row.venue_known > 0) {
      row.pct_conference = 100.0 * static_cast<double>(conference[c]) / static_cast<double>(row.venue_known);
      row.pct_journal = 100.0 * static_cast<double>(journal[c]) / static_cast<double>(row.venue_known);
    }
  }
  PerCategory<double> sq;
  for (const auto& p : labels.papers) {
    const auto c = p.result.category;
    const double d = graph.year(p.node) - out[c].mean_year;
    sq[c] += d * d;
  }
  for (auto c : kAllCategories) {
    if (out[c].papers > 0) out[c].sd_year = std::sqrt(sq[c] / static_cast<double>(out[c].papers));
  }
  return out;
}

bool has_authors(const ingest::CitationGraph& graph) {
  return std::any_of(graph.records().begin(), graph.records().end(),
                     [](const ingest::PaperRecord& r) { return !r.authors.empty(); });
}

namespace {

bool share_author(const ingest::PaperRecord& a, const ingest::PaperRecord& b) {
  if (a.authors.empty() || b.authors.empty()) return false;
  const std::set<std::string_view> left(a.authors.begin(), a.authors.end());
  return std::any_of(b.authors.begin(), b.authors.end(),
                     [&](const std::string& x) { return left.contains(x); });
}

}  // namespace

StrippedGraph strip_self_citations(const ingest::CitationGraph& graph) {
  if (!has_authors(graph)) throw CapabilityError("authors", "self-citation analysis needs author lists");
  StrippedGraph out;
  out.graph = ingest::filter_edges(graph, [&](ingest::NodeId u, ingest::NodeId v) {
    if (!share_author(graph.record(u), graph.record(v))) return true;
    out.removed.push_back({graph.id(u), graph.id(v), graph.year(u) - graph.year(v)});
    return false;
  });
  std::sort(out.removed.begin(), out.removed.end(), [](const RemovedEdge& a, const RemovedEdge& b) {
    return a.citing != b.citing ? a.citing < b.citing : a.cited < b.cited;
  });
  return out;
}

std::vector<int> default_threshold_sweep() { return {10, 11, 12, 13, 14}; }

SelfCitationReport self_citation_confusion(const ingest::CitationGraph& graph,
                                           const profile::ClassifierConfig& cfg,
                                           std::span<const int> thresholds,
                                           const profile::CorpusOptions& opts) {
  const auto stripped = strip_self_citations(graph);
  auto corpus_opts = opts;
  if (!corpus_opts.observation_end) corpus_opts.observation_end = graph.last_year();

  SelfCitationReport out;
  out.removed_edges = stripped.removed.size();
  for (int th : thresholds) {
    auto c = cfg;
    c.oth_citation_threshold = th;
    const auto before = profile::classify_corpus(graph, c, corpus_opts);
    const auto after = profile::classify_corpus(stripped.graph, c, corpus_opts);
    ThresholdConfusion m;
    m.threshold = th;
    // Same nodes and observation window, so both label lists align.
    for (std::size_t i = 0; i < before.papers.size(); ++i) {
      const auto from = before.papers[i].result.category;
      const auto to = after.papers[i].result.category;
      m.fraction[from][to] += 1.0;
      ++m.row_papers[from];
    }
    for (auto from : kAllCategories) {
      if (m.row_papers[from] == 0) continue;
      for (auto to : kAllCategories) m.fraction[from][to] /= static_cast<double>(m.row_papers[from]);
    }
    out.matrices.push_back(m);
  }

  const auto labels = profile::classify_corpus(graph, cfg, corpus_opts);
  for (auto c : kAllCategories) out.timing[c].assign(kTimingBins, 0.0);
  for (const auto& e : stripped.removed) {
    if (e.age < 0) continue;
    const auto* p = labels.find(e.cited);
    if (p == nullptr) continue;
    const auto bin = std::min<std::size_t>(static_cast<std::size_t>(e.age), kTimingBins - 1);
    out.timing[p->result.category][bin] += 1.0;
    ++out.timing_edges[p->result.category];
  }
  for (auto c : kAllCategories) {
    if (out.timing_edges[c] == 0) continue;
    for (auto& v : out.timing[c]) v /= static_cast<double>(out.timing_edges[c]);
  }
  return out;
}

std::vector<CoreCompositionRow> core_periphery_evolution(const ingest::CitationGraph& graph,
                                                         const profile::CorpusLabels& labels,
                                                         std::span<const int> years) {
  std::vector<CoreCompositionRow> rows;
  for (int year : years) {
    const auto sub = ingest::induced_subgraph(graph, year);
    const auto shells = kshell_decompose(sub);
    std::array<PerCategory<std::size_t>, 7> counts{};
    for (const auto& p : labels.papers) {
      const auto n = sub.find(p.paper_id);
      if (!n) throw InvalidStateError("labeled paper " + p.paper_id + " missing from the " +
                                      std::to_string(year) + " graph");
      const int b = shells.broad_shell[*n];
      if (b > 0) ++counts[static_cast<std::size_t>(b)][p.result.category];
    }
    for (int b = 1; b <= 6; ++b) {
      const auto& cnt = counts[static_cast<std::size_t>(b)];
      std::size_t total = 0;
      for (auto v : cnt.values) total += v;
      if (total == 0) continue;
      for (auto c : kAllCategories) {
        rows.push_back({year, b, c, cnt[c], static_cast<double>(cnt[c]) / static_cast<double>(total)});
      }
    }
  }
  return rows;
}

profile::ClassifierConfig horizon_config(const profile::ClassifierConfig& cfg, int horizon) {
  auto c = cfg;
  c.oth_citation_threshold = static_cast<int>(static_cast<long>(cfg.oth_citation_threshold) * horizon /
                                              cfg.min_history_years);
  c.min_history_years = horizon;
  c.max_window_years = horizon;
  return c;
}

StabilityFlow stability_flows(std::span<const ingest::CitationSeries> series,
                              const profile::ClassifierConfig& cfg, std::span<const int> horizons) {
  if (horizons.empty()) throw std::invalid_argument("at least one horizon is required");
  if (!std::is_sorted(horizons.begin(), horizons.end()) || horizons.front() < 1) {
    throw std::invalid_argument("horizons must be positive and ascending");
  }
  StabilityFlow out;
  out.horizons.assign(horizons.begin(), horizons.end());
  out.labels.resize(horizons.size());
  std::vector<profile::ClassifierConfig> configs;
  for (int h : horizons) configs.push_back(horizon_config(cfg, h));

  const auto longest = static_cast<std::size_t>(horizons.back());
  for (const auto& s : series) {
    if (s.counts.size() < longest) continue;
    out.papers.push_back(s.paper_id);
    for (std::size_t h = 0; h < horizons.size(); ++h) {
      ingest::CitationSeries cut{s.paper_id, s.pub_year,
                                 {s.counts.begin(), s.counts.begin() + horizons[h]}};
      out.labels[h].push_back(profile::classify(cut, configs[h]).category);
    }
  }
  for (std::size_t h = 0; h + 1 < horizons.size(); ++h) {
    Transition t;
    t.from_horizon = horizons[h];
    t.to_horizon = horizons[h + 1];
    for (std::size_t i = 0; i < out.papers.size(); ++i) ++t.counts[out.labels[h][i]][out.labels[h + 1][i]];
    out.transitions.push_back(t);
  }
  return out;
}

StabilityFlow stability_flows(const ingest::CitationGraph& graph, const profile::ClassifierConfig& cfg,
                              const StabilityOptions& opts) {
  if (opts.horizons.empty()) throw std::invalid_argument("at least one horizon is required");
  std::vector<ingest::CitationSeries> series;
  if (graph.node_count() > 0) {
    const int end = opts.observation_end.value_or(*graph.last_year());
    const int longest = *std::max_element(opts.horizons.begin(), opts.horizons.end());
    for (ingest::NodeId n = 0; n < graph.node_count(); ++n) {
      if (end - graph.year(n) + 1 < longest) continue;
      series.push_back(ingest::observed_series(graph, n, end, longest));
    }
  }
  return stability_flows(series, cfg, opts.horizons);
}

PeakStatistics peakmul_statistics(std::span<const profile::LabeledPaper> papers) {
  PeakStatistics out;
  std::vector<double> height_sum, position_sum;
  std::size_t two = 0;
  PerCategory<double> single_height, single_position;
  for (const auto& p : papers) {
    const auto& r = p.result;
    const auto& peaks = r.peaks.peaks;
    if (r.category == Category::PeakMul) {
      ++out.peakmul_papers;
      if (peaks.size() == 2) ++two;
      if (out.peakmul_by_rank.size() < peaks.size()) {
        out.peakmul_by_rank.resize(peaks.size());
        height_sum.resize(peaks.size(), 0.0);
        position_sum.resize(peaks.size(), 0.0);
      }
      for (std::size_t i = 0; i < peaks.size(); ++i) {
        ++out.peakmul_by_rank[i].papers;
        height_sum[i] += r.smoothed[static_cast<std::size_t>(peaks[i].position)];
        position_sum[i] += peaks[i].position;
      }
    } else if (peaks.size() == 1) {
      ++out.single_peak[r.category].papers;
      single_height[r.category] += r.smoothed[static_cast<std::size_t>(peaks[0].position)];
      single_position[r.category] += peaks[0].position;
    }
  }
  if (out.peakmul_papers > 0) {
    out.fraction_two_peaks = static_cast<double>(two) / static_cast<double>(out.peakmul_papers);
  }
  for (std::size_t i = 0; i < out.peakmul_by_rank.size(); ++i) {
    auto& s = out.peakmul_by_rank[i];
    s.mean_height = height_sum[i] / static_cast<double>(s.papers);
    s.mean_position = position_sum[i] / static_cast<double>(s.papers);
  }
  for (auto c : kAllCategories) {
    auto& s = out.single_peak[c];
    if (s.papers == 0) continue;
    s.mean_height = single_height[c] / static_cast<double>(s.papers);
    s.mean_position = single_position[c] / static_cast<double>(s.papers);
  }
  return out;
}

}  // namespace citeprof::netanalysis
