#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "citeprof/error.hpp"
#include "citeprof/ingest.hpp"

namespace citeprof::ingest {

std::optional<NodeId> CitationGraph::find(std::string_view paper_id) const {
  auto it = by_id_.find(std::string(paper_id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

NodeId CitationGraph::at(std::string_view paper_id) const {
  auto n = find(paper_id);
  if (!n) throw NotFoundError("unknown paper id: " + std::string(paper_id));
  return *n;
}

std::optional<int> CitationGraph::first_year() const {
  if (year_index_.empty()) return std::nullopt;
  return year_index_.begin()->first;
}

std::optional<int> CitationGraph::last_year() const {
  if (year_index_.empty()) return std::nullopt;
  return year_index_.rbegin()->first;
}

std::vector<std::pair<NodeId, NodeId>> CitationGraph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < out_.size(); ++u) {
    for (NodeId v : out_[u]) out.emplace_back(u, v);
  }
  return out;
}

void CitationGraph::index_nodes() {
  by_id_.clear();
  year_index_.clear();
  by_id_.reserve(records_.size());
  for (NodeId n = 0; n < records_.size(); ++n) {
    by_id_.emplace(records_[n].id, n);
    year_index_[records_[n].year].push_back(n);
  }
  out_.assign(records_.size(), {});
  in_.assign(records_.size(), {});
}

CitationGraph build_graph(std::vector<PaperRecord> records, const GraphOptions& opts) {
  std::sort(records.begin(), records.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].id == records[i - 1].id) {
      throw std::invalid_argument("duplicate paper id: " + records[i].id);
    }
  }

  CitationGraph g;
  g.strict_ = opts.strict_chronology;
  g.records_ = std::move(records);
  g.index_nodes();

  for (NodeId u = 0; u < g.records_.size(); ++u) {
    auto& out = g.out_[u];
    for (const auto& ref : g.records_[u].references) {
      auto it = g.by_id_.find(ref);
      if (it == g.by_id_.end()) {
        ++g.dangling_;
        continue;
      }
      const NodeId v = it->second;
      if (v == u) continue;
      if (g.records_[u].year < g.records_[v].year) {
        ++g.anachronistic_;
        if (opts.strict_chronology) continue;
      }
      out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (NodeId v : out) g.in_[v].push_back(u);
    g.edge_count_ += out.size();
  }
  // in_ lists are filled in increasing u, hence already sorted.
  return g;
}

CitationGraph filter_edges(const CitationGraph& g,
                           const std::function<bool(NodeId, NodeId)>& keep) {
  CitationGraph h;
  h.strict_ = g.strict_;
  h.records_ = g.records_;
  h.index_nodes();
  h.dangling_ = g.dangling_;
  for (NodeId u = 0; u < g.out_.size(); ++u) {
    for (NodeId v : g.out_[u]) {
      if (!keep(u, v)) continue;
      h.out_[u].push_back(v);
      h.in_[v].push_back(u);
      ++h.edge_count_;
      if (g.year(u) < g.year(v)) ++h.anachronistic_;
    }
  }
  return h;
}

CitationGraph induced_subgraph(const CitationGraph& g, int max_year) {
  CitationGraph h;
  h.strict_ = g.strict_;
  std::vector<NodeId> remap(g.node_count(), std::numeric_limits<NodeId>::max());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (g.year(u) <= max_year) {
      remap[u] = static_cast<NodeId>(h.records_.size());
      h.records_.push_back(g.records_[u]);
    }
  }
  h.index_nodes();
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (remap[u] == std::numeric_limits<NodeId>::max()) continue;
    for (NodeId v : g.out_[u]) {
      if (remap[v] == std::numeric_limits<NodeId>::max()) continue;
      h.out_[remap[u]].push_back(remap[v]);
      h.in_[remap[v]].push_back(remap[u]);
      ++h.edge_count_;
      if (g.year(u) < g.year(v)) ++h.anachronistic_;
    }
  }
  return h;
}

long CitationSeries::total() const { return std::accumulate(counts.begin(), counts.end(), 0L); }

long CitationSeries::total_first(std::size_t years) const {
  const auto n = std::min(years, counts.size());
  return std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(n), 0L);
}

namespace {

CitationSeries series_over(const CitationGraph& g, NodeId n, int length) {
  CitationSeries s;
  s.paper_id = g.id(n);
  s.pub_year = g.year(n);
  s.counts.assign(static_cast<std::size_t>(std::max(length, 0)), 0);
  for (NodeId citing : g.citations(n)) {
    const int age = g.year(citing) - s.pub_year;
    if (age >= 0 && age < length) ++s.counts[static_cast<std::size_t>(age)];
  }
  return s;
}

}  // namespace

CitationSeries extract_series(const CitationGraph& g, NodeId n, int horizon_years) {
  if (horizon_years < 1) throw std::invalid_argument("horizon_years must be >= 1");
  return series_over(g, n, horizon_years);
}

CitationSeries extract_series(const CitationGraph& g, std::string_view paper_id,
                              int horizon_years) {
  return extract_series(g, g.at(paper_id), horizon_years);
}

CitationSeries observed_series(const CitationGraph& g, NodeId n, int observation_end,
                               int max_years) {
  const int history = observation_end - g.year(n) + 1;
  return series_over(g, n, std::min(history, max_years));
}

}  // namespace citeprof::ingest
