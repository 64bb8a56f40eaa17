#include "citeprof/export.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "citeprof/error.hpp"

namespace citeprof::output {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string_view name(Category c) { return to_string(c); }

}  // namespace

void write_labels_csv(std::ostream& out, const profile::CorpusLabels& labels) {
  out << "paper_id,category,n_peaks,peak_positions,peak_heights,total_citations_10y\n";
  for (const auto& p : labels.papers) {
    const auto& r = p.result;
    std::string positions, heights;
    for (std::size_t i = 0; i < r.peaks.size(); ++i) {
      if (i) {
        positions += ';';
        heights += ';';
      }
      positions += std::to_string(r.peaks.peaks[i].position);
      heights += format_number(r.peaks.peaks[i].height);
    }
    out << ingest::csv_quote(p.paper_id) << ',' << name(r.category) << ',' << r.peaks.size() << ','
        << positions << ',' << heights << ',' << r.total_first_window << '\n';
  }
}

std::vector<std::pair<std::string, Category>> read_labels_csv(std::istream& in) {
  std::vector<std::pair<std::string, Category>> out;
  std::string line;
  std::optional<std::size_t> id_col, cat_col;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = ingest::split_csv_line(line);
    if (!cells) throw FormatError("labels line " + std::to_string(line_no) + ": unterminated quote");
    if (!id_col) {
      for (std::size_t i = 0; i < cells->size(); ++i) {
        if ((*cells)[i] == "paper_id") id_col = i;
        if ((*cells)[i] == "category") cat_col = i;
      }
      if (!id_col || !cat_col) throw FormatError("labels header needs paper_id and category columns");
      continue;
    }
    if (cells->size() <= std::max(*id_col, *cat_col)) {
      throw FormatError("labels line " + std::to_string(line_no) + ": too few columns");
    }
    auto c = parse_category((*cells)[*cat_col]);
    if (!c) throw FormatError("labels line " + std::to_string(line_no) + ": unknown category");
    out.emplace_back((*cells)[*id_col], *c);
  }
  if (!id_col) throw FormatError("labels file is empty");
  return out;
}

ordered_json census_json(const profile::Census& census) {
  ordered_json counts = ordered_json::object(), fractions = ordered_json::object();
  for (auto c : kAllCategories) {
    counts[std::string(name(c))] = census.counts[c];
    fractions[std::string(name(c))] = census.fraction(c);
  }
  return {{"labeled", census.labeled()},
          {"ineligible", census.ineligible},
          {"counts", counts},
          {"fractions", fractions}};
}

void write_confusion_csv(std::ostream& out, const netanalysis::SelfCitationReport& report) {
  out << "threshold,from,to,fraction\n";
  for (const auto& m : report.matrices) {
    for (auto from : kAllCategories) {
      if (m.row_papers[from] == 0) continue;
      for (auto to : kAllCategories) {
        out << m.threshold << ',' << name(from) << ',' << name(to) << ','
            << format_number(m.fraction[from][to]) << '\n';
      }
    }
  }
}

void write_timing_csv(std::ostream& out, const netanalysis::SelfCitationReport& report) {
  out << "category,age,fraction\n";
  for (auto c : kAllCategories) {
    if (report.timing_edges[c] == 0) continue;
    for (std::size_t a = 0; a < report.timing[c].size(); ++a) {
      const bool last = a + 1 == report.timing[c].size();
      out << name(c) << ',' << a << (last ? "+" : "") << ',' << format_number(report.timing[c][a]) << '\n';
    }
  }
}

void write_removed_edges_csv(std::ostream& out, const netanalysis::StrippedGraph& stripped) {
  out << "citing,cited,age\n";
  for (const auto& e : stripped.removed) {
    out << ingest::csv_quote(e.citing) << ',' << ingest::csv_quote(e.cited) << ',' << e.age << '\n';
  }
}

void write_shells_csv(std::ostream& out, const ingest::CitationGraph& graph,
                      const netanalysis::ShellAssignment& shells) {
  out << "paper_id,shell,broad_shell\n";
  for (ingest::NodeId n = 0; n < graph.node_count(); ++n) {
    out << ingest::csv_quote(graph.id(n)) << ',' << shells.shell[n] << ',' << shells.broad_shell[n] << '\n';
  }
}

void write_core_csv(std::ostream& out, const std::vector<netanalysis::CoreCompositionRow>& rows) {
  out << "year,broad_shell,category,papers,fraction\n";
  for (const auto& r : rows) {
    out << r.year << ',' << r.broad_shell << ',' << name(r.category) << ',' << r.papers << ','
        << format_number(r.fraction) << '\n';
  }
}

void write_flows_csv(std::ostream& out, const netanalysis::StabilityFlow& flow) {
  out << "window,from,to,count\n";
  for (const auto& t : flow.transitions) {
    const auto window = std::to_string(t.from_horizon) + "-" + std::to_string(t.to_horizon);
    for (auto from : kAllCategories) {
      for (auto to : kAllCategories) {
        if (t.counts[from][to] == 0) continue;
        out << window << ',' << name(from) << ',' << name(to) << ',' << t.counts[from][to] << '\n';
      }
    }
  }
}

void write_buckets_csv(std::ostream& out, const netanalysis::CitationBuckets& buckets) {
  out << "category,bucket_lo,bucket_hi,probability\n";
  for (auto c : kAllCategories) {
    for (std::size_t i = 0; i < buckets.boundaries.size(); ++i) {
      out << name(c) << ',' << buckets.boundaries[i].lo << ',' << buckets.boundaries[i].hi << ','
          << format_number(buckets.probability[c][i]) << '\n';
    }
  }
}

void write_venue_csv(std::ostream& out, const PerCategory<netanalysis::VenueYearRow>& rows) {
  out << "category,papers,mean_year,sd_year,venue_known,pct_conference,pct_journal\n";
  for (auto c : kAllCategories) {
    const auto& r = rows[c];
    out << name(c) << ',' << r.papers << ',' << format_number(r.mean_year) << ',' << format_number(r.sd_year)
        << ',' << r.venue_known << ',' << format_number(r.pct_conference) << ','
        << format_number(r.pct_journal) << '\n';
  }
}

ordered_json peakstats_json(const netanalysis::PeakStatistics& stats) {
  auto rank_json = [](const netanalysis::PeakRankStats& s) {
    return ordered_json{{"papers", s.papers}, {"mean_height", s.mean_height}, {"mean_position", s.mean_position}};
  };
  ordered_json ranks = ordered_json::array();
  for (const auto& r : stats.peakmul_by_rank) ranks.push_back(rank_json(r));
  ordered_json single = ordered_json::object();
  for (auto c : kAllCategories) single[std::string(name(c))] = rank_json(stats.single_peak[c]);
  return {{"peakmul_papers", stats.peakmul_papers},
          {"fraction_two_peaks", stats.fraction_two_peaks},
          {"peakmul_by_rank", ranks},
          {"single_peak", single}};
}

void write_belts_csv(std::ostream& out, const PerCategory<report::CitationBelt>& belts) {
  out << "category,age,q1,mean,q3\n";
  for (auto c : kAllCategories) {
    for (std::size_t a = 0; a < belts[c].ages.size(); ++a) {
      const auto& p = belts[c].ages[a];
      out << name(c) << ',' << a << ',' << format_number(p.q1) << ',' << format_number(p.mean) << ','
          << format_number(p.q3) << '\n';
    }
  }
}

void write_profiles_csv(std::ostream& out, const PerCategory<growth::CategoryProfile>& profiles) {
  out << "category,age,mean,q1,q3\n";
  for (auto c : kAllCategories) {
    for (std::size_t a = 0; a < profiles[c].ages.size(); ++a) {
      const auto& p = profiles[c].ages[a];
      out << name(c) << ',' << a << ',' << format_number(p.mean) << ',' << format_number(p.q1) << ','
          << format_number(p.q3) << '\n';
    }
  }
}

void write_degrees_csv(std::ostream& out, const PerCategory<report::DegreeDistribution>& dists) {
  out << "category,indegree,fraction\n";
  for (auto c : kAllCategories) {
    for (const auto& [d, f] : dists[c].pmf) out << name(c) << ',' << d << ',' << format_number(f) << '\n';
  }
}

ordered_json comparison_json(const PerCategory<report::DegreeDistribution>& a,
                             const PerCategory<report::DegreeDistribution>& b) {
  ordered_json out = ordered_json::array();
  for (auto c : kAllCategories) {
    if (a[c].empty() || b[c].empty()) continue;
    const auto d = report::compare_distributions(a[c], b[c]);
    out.push_back({{"category", std::string(name(c))}, {"ks", d.ks}, {"tv", d.tv}});
  }
  return out;
}

void write_edges_jsonl(std::ostream& out, const ingest::CitationGraph& graph) {
  for (const auto& [u, v] : graph.edges()) {
    out << ordered_json{{"citing", graph.id(u)}, {"cited", graph.id(v)}}.dump() << '\n';
  }
}

void write_nodes_csv(std::ostream& out, const ingest::CitationGraph& graph) {
  out << "paper_id,year,category,in_degree,out_degree\n";
  for (ingest::NodeId n = 0; n < graph.node_count(); ++n) {
    const auto& r = graph.record(n);
    out << ingest::csv_quote(r.id) << ',' << r.year << ',' << (r.category ? name(*r.category) : "") << ','
        << graph.in_degree(n) << ',' << graph.out_degree(n) << '\n';
  }
}

}  // namespace citeprof::output
