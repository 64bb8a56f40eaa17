#include "citeprof/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "citeprof/error.hpp"

namespace citeprof::profile {

void ClassifierConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw ConfigError(name, "must be positive");
  };
  positive(min_history_years, "min_history_years");
  positive(max_window_years, "max_window_years");
  positive(smoothing_window, "smoothing_window");
  positive(peak_min_separation, "peak_min_separation");
  positive(early_peak_bound, "early_peak_bound");
  if (oth_citation_threshold < 0) throw ConfigError("oth_citation_threshold", "must be >= 0");
  if (smoothing_window % 2 == 0) throw ConfigError("smoothing_window", "must be odd");
  if (max_window_years < min_history_years) {
    throw ConfigError("max_window_years", "must be >= min_history_years");
  }
  if (!(peak_height_fraction > 0.0 && peak_height_fraction <= 1.0)) {
    throw ConfigError("peak_height_fraction", "must be in (0, 1]");
  }
  if (!(min_peak_height > 0.0 && min_peak_height <= 1.0)) {
    throw ConfigError("min_peak_height", "must be in (0, 1]");
  }
  if (!(monotone_tolerance >= 0.0)) throw ConfigError("monotone_tolerance", "must be >= 0");
}

SmoothedSeries smooth(std::span<const double> values, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("smoothing window must be odd and >= 1");
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::ptrdiff_t half = window / 2;
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (std::size_t i = 0; i < values.size(); ++i) prefix[i + 1] = prefix[i] + values[i];

  SmoothedSeries out;
  out.window = window;
  out.values.resize(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto lo = std::max<std::ptrdiff_t>(0, i - half);
    const auto hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    const double sum = prefix[static_cast<std::size_t>(hi + 1)] - prefix[static_cast<std::size_t>(lo)];
    out.values[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

SmoothedSeries smooth(const ingest::CitationSeries& series, int window) {
  std::vector<double> v(series.counts.begin(), series.counts.end());
  return smooth(v, window);
}

NormalizedSeries normalize(std::span<const double> values) {
  NormalizedSeries out{std::vector<double>(values.begin(), values.end())};
  if (out.values.empty()) return out;
  const double peak = *std::max_element(out.values.begin(), out.values.end());
  if (peak <= 0.0) return out;
  for (auto& v : out.values) v /= peak;
  return out;
}

std::vector<int> local_maxima(std::span<const double> values, bool include_endpoints) {
  std::vector<int> out;
  const std::size_t n = values.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    const bool has_left = i > 0;
    const bool has_right = j + 1 < n;
    const bool left_lower = has_left && values[i - 1] < values[i];
    const bool right_lower = has_right && values[j + 1] < values[i];
    if (has_left && has_right) {
      if (left_lower && right_lower) out.push_back(static_cast<int>(i));
    } else if (include_endpoints && (left_lower || right_lower)) {
      out.push_back(static_cast<int>(i));
    }
    i = j + 1;
  }
  return out;
}

PeakSet filter_peaks(std::span<const double> values, std::span<const int> candidates,
                     const ClassifierConfig& cfg) {
  std::vector<Peak> tall;
  for (int p : candidates) {
    const double h = values[static_cast<std::size_t>(p)];
    if (h >= cfg.min_peak_height) tall.push_back({p, h});
  }
  std::sort(tall.begin(), tall.end(), [](const Peak& a, const Peak& b) {
    return a.height != b.height ? a.height > b.height : a.position < b.position;
  });

  std::vector<Peak> kept;
  for (const auto& p : tall) {
    const bool clear = std::none_of(kept.begin(), kept.end(), [&](const Peak& k) {
      return std::abs(k.position - p.position) <= cfg.peak_min_separation;
    });
    if (clear) kept.push_back(p);
  }
  PeakSet out;
  if (kept.empty()) return out;
  const double tallest = kept.front().height;
  for (const auto& p : kept) {
    if (p.height >= cfg.peak_height_fraction * tallest) out.peaks.push_back(p);
  }
  std::sort(out.peaks.begin(), out.peaks.end(),
            [](const Peak& a, const Peak& b) { return a.position < b.position; });
  return out;
}

PeakSet detect_peaks(const NormalizedSeries& series, const ClassifierConfig& cfg) {
  const auto candidates = local_maxima(series.values, false);
  return filter_peaks(series.values, candidates, cfg);
}

namespace {

bool non_decreasing(std::span<const double> v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - tol) return false;
  }
  return true;
}

bool non_increasing(std::span<const double> v, double tol) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[i - 1] + tol) return false;
  }
  return true;
}

}  // namespace

Classification classify(const ingest::CitationSeries& series, const ClassifierConfig& cfg) {
  const auto min_len = static_cast<std::size_t>(cfg.min_history_years);
  if (series.counts.size() < min_len) {
    throw IneligibleError("paper " + series.paper_id + " has " +
                          std::to_string(series.counts.size()) + " years of history, need " +
                          std::to_string(cfg.min_history_years));
  }
  const auto len = std::min(series.counts.size(), static_cast<std::size_t>(cfg.max_window_years));

  Classification out;
  out.window_length = len;
  out.total_first_window = series.total_first(min_len);

  std::vector<double> raw(series.counts.begin(), series.counts.begin() + static_cast<std::ptrdiff_t>(len));
  for (std::size_t i = 0; i < len; ++i) out.total_window += series.counts[i];
  out.smoothed = smooth(raw, cfg.smoothing_window).values;
  out.normalized = normalize(out.smoothed).values;

  if (out.total_first_window <= cfg.oth_citation_threshold) {
    out.category = Category::Oth;
    out.rule = "low-citations";
    return out;
  }

  const std::span<const double> v = out.normalized;
  const double tol = cfg.monotone_tolerance;
  const auto candidates = local_maxima(v, true);
  out.peaks = filter_peaks(v, candidates, cfg);

  if (out.peaks.empty()) {
    // Only a flat window has no maximum at all.
    out.category = non_decreasing(v, tol) ? Category::MonIncr : Category::Oth;
    out.rule = "flat";
    return out;
  }
  if (out.peaks.size() >= 2) {
    out.category = Category::PeakMul;
    out.rule = "multiple-peaks";
    return out;
  }

  const auto p = static_cast<std::size_t>(out.peaks.peaks.front().position);
  const bool reaches_end = std::all_of(v.begin() + static_cast<std::ptrdiff_t>(p), v.end(),
                                       [&](double x) { return x == v[p]; });
  if (reaches_end) {
    const bool run_up = non_decreasing(v.first(p + 1), tol);
    out.category = run_up ? Category::MonIncr : Category::Oth;
    out.rule = run_up ? "rise-to-end" : "end-max-without-run-up";
    return out;
  }
  if (p <= 1) {
    const bool run_off = non_increasing(v.subspan(p), tol);
    out.category = run_off ? Category::MonDec : Category::Oth;
    out.rule = run_off ? "early-max-then-decline" : "early-max-without-decline";
    return out;
  }
  if (p <= static_cast<std::size_t>(cfg.early_peak_bound)) {
    out.category = Category::PeakInit;
    out.rule = "early-peak";
  } else {
    out.category = Category::PeakLate;
    out.rule = "late-peak";
  }
  return out;
}

std::size_t Census::labeled() const {
  std::size_t n = 0;
  for (auto c : counts.values) n += c;
  return n;
}

double Census::fraction(Category c) const {
  const auto n = labeled();
  return n == 0 ? 0.0 : static_cast<double>(counts[c]) / static_cast<double>(n);
}

const LabeledPaper* CorpusLabels::find(std::string_view paper_id) const {
  auto it = std::lower_bound(papers.begin(), papers.end(), paper_id,
                             [](const LabeledPaper& p, std::string_view id) { return p.paper_id < id; });
  if (it == papers.end() || it->paper_id != paper_id) return nullptr;
  return &*it;
}

CorpusLabels classify_corpus(const ingest::CitationGraph& graph, const ClassifierConfig& cfg,
                             const CorpusOptions& opts) {
  cfg.validate();
  CorpusLabels out;
  if (graph.node_count() == 0) return out;
  const int end = opts.observation_end.value_or(*graph.last_year());

  const std::size_t n = graph.node_count();
  std::vector<std::optional<Classification>> results(n);
  auto work = [&](std::size_t begin, std::size_t stop) {
    for (std::size_t i = begin; i < stop; ++i) {
      const auto node = static_cast<ingest::NodeId>(i);
      if (end - graph.year(node) + 1 < cfg.min_history_years) continue;
      results[i] = classify(ingest::observed_series(graph, node, end, cfg.max_window_years), cfg);
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, std::max<std::size_t>(n / 256, 1));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t b = t * chunk;
      pool.emplace_back(work, b, std::min(n, b + chunk));
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const auto node = static_cast<ingest::NodeId>(i);
    if (!results[i]) {
      out.ineligible.push_back(graph.id(node));
      continue;
    }
    ++out.census.counts[results[i]->category];
    out.papers.push_back({node, graph.id(node), std::move(*results[i])});
  }
  out.census.ineligible = out.ineligible.size();
  return out;
}

}  // namespace citeprof::profile
