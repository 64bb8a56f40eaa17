#pragma once

// CSV and JSON writers for every artifact the toolkit produces. Numbers are
// printed in shortest round-trip form so identical results give identical
// bytes.

#include <iosfwd>
#include <optional>
#include <string>

#include "json.hpp"

#include "citeprof/growth.hpp"
#include "citeprof/ingest.hpp"
#include "citeprof/netanalysis.hpp"
#include "citeprof/profile.hpp"
#include "citeprof/report.hpp"

namespace citeprof::output {

std::string format_number(double v);

/// paper_id,category,n_peaks,peak_positions,peak_heights,total_citations_10y
/// (positions and heights `;`-separated).
void write_labels_csv(std::ostream& out, const profile::CorpusLabels& labels);

/// paper_id -> category from a labels CSV. Throws FormatError.
std::vector<std::pair<std::string, Category>> read_labels_csv(std::istream& in);

nlohmann::ordered_json census_json(const profile::Census& census);

void write_confusion_csv(std::ostream& out, const netanalysis::SelfCitationReport& report);
void write_timing_csv(std::ostream& out, const netanalysis::SelfCitationReport& report);
void write_removed_edges_csv(std::ostream& out, const netanalysis::StrippedGraph& stripped);

void write_shells_csv(std::ostream& out, const ingest::CitationGraph& graph,
                      const netanalysis::ShellAssignment& shells);
void write_core_csv(std::ostream& out, const std::vector<netanalysis::CoreCompositionRow>& rows);

/// window,from,to,count with window "10-15"; zero cells omitted.
void write_flows_csv(std::ostream& out, const netanalysis::StabilityFlow& flow);

void write_buckets_csv(std::ostream& out, const netanalysis::CitationBuckets& buckets);
void write_venue_csv(std::ostream& out, const PerCategory<netanalysis::VenueYearRow>& rows);
nlohmann::ordered_json peakstats_json(const netanalysis::PeakStatistics& stats);

void write_belts_csv(std::ostream& out, const PerCategory<report::CitationBelt>& belts);
void write_profiles_csv(std::ostream& out, const PerCategory<growth::CategoryProfile>& profiles);
void write_degrees_csv(std::ostream& out, const PerCategory<report::DegreeDistribution>& dists);

/// [{category, ks, tv}], skipping categories empty on either side.
nlohmann::ordered_json comparison_json(const PerCategory<report::DegreeDistribution>& a,
                                       const PerCategory<report::DegreeDistribution>& b);

/// One {"citing": id, "cited": id} object per line.
void write_edges_jsonl(std::ostream& out, const ingest::CitationGraph& graph);
/// paper_id,year,category,in_degree,out_degree
void write_nodes_csv(std::ostream& out, const ingest::CitationGraph& graph);

}  // namespace citeprof::output
