#pragma once

// Bibliographic records, the citation graph built from them, and per-paper
// citation time series.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "citeprof/category.hpp"

namespace citeprof::ingest {

enum class VenueType : std::uint8_t { conference, journal, unknown };

std::string_view to_string(VenueType v);
std::optional<VenueType> parse_venue(std::string_view s);

enum class Format : std::uint8_t { jsonl, csv };

std::optional<Format> parse_format(std::string_view s);

struct PaperRecord {
  std::string id;
  int year = 0;
  VenueType venue = VenueType::unknown;
  std::vector<std::string> fields;
  std::vector<std::string> authors;
  std::vector<std::string> references;
  // Ground-truth or generation-time label, when the dataset carries one.
  std::optional<Category> category;

  bool operator==(const PaperRecord&) const = default;
};

enum class RejectReason : std::uint8_t { malformed, missing_id, bad_year, duplicate_id };

std::string_view to_string(RejectReason r);

struct Rejection {
  std::size_t line = 0;  // 1-based line number in the source (data lines for csv)
  RejectReason reason = RejectReason::malformed;
  std::string detail;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<Rejection> rejections;
  std::size_t dropped_self_references = 0;
  std::size_t dropped_duplicate_references = 0;

  std::size_t rejected() const { return rejections.size(); }
  std::size_t count(RejectReason r) const;
};

struct IngestOptions {
  int min_year = 1900;
  int max_year = 2100;
};

struct ParsedDataset {
  std::vector<PaperRecord> records;
  IngestReport report;
};

/// Parses a whole stream. Malformed records are skipped and reported; only a
/// stream that cannot be read at all throws (IoError).
ParsedDataset parse_dataset(std::istream& in, Format format, const IngestOptions& opts = {});

/// Opens `path` and parses it. When `format` is empty it is inferred from the
/// extension (".csv" → csv, anything else → jsonl). Throws IoError when the
/// file cannot be opened.
ParsedDataset read_dataset(const std::filesystem::path& path, std::optional<Format> format = {},
                           const IngestOptions& opts = {});

void write_dataset(std::ostream& out, std::span<const PaperRecord> records, Format format);

/// Splits one CSV line (RFC 4180 quoting). Returns nullopt for an
/// unterminated quote.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

/// Quotes a CSV cell when it contains a comma, quote or newline.
std::string csv_quote(std::string_view s);

using NodeId = std::uint32_t;

struct GraphOptions {
  // Drop citations whose citing paper is older than the cited one.
  bool strict_chronology = false;
};

/// Immutable directed citation graph; an edge u→v means u cites v. Node ids
/// are assigned in lexicographic order of paper id, so the graph does not
/// depend on record order.
class CitationGraph {
 public:
  CitationGraph() = default;

  std::size_t node_count() const { return records_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  const PaperRecord& record(NodeId n) const { return records_[n]; }
  std::span<const PaperRecord> records() const { return records_; }
  const std::string& id(NodeId n) const { return records_[n].id; }
  int year(NodeId n) const { return records_[n].year; }

  std::optional<NodeId> find(std::string_view paper_id) const;
  /// Throws NotFoundError.
  NodeId at(std::string_view paper_id) const;

  /// Papers cited by `n`, ascending.
  std::span<const NodeId> references(NodeId n) const { return out_[n]; }
  /// Papers citing `n`, ascending.
  std::span<const NodeId> citations(NodeId n) const { return in_[n]; }
  std::size_t in_degree(NodeId n) const { return in_[n].size(); }
  std::size_t out_degree(NodeId n) const { return out_[n].size(); }

  const std::map<int, std::vector<NodeId>>& year_index() const { return year_index_; }
  std::optional<int> first_year() const;
  std::optional<int> last_year() const;

  /// All edges ordered by (citing, cited).
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  std::size_t dangling_references() const { return dangling_; }
  /// Edges citing a newer paper: kept (and counted) unless strict
  /// chronology was requested, in which case they were dropped.
  std::size_t anachronistic_edges() const { return anachronistic_; }
  bool strict_chronology() const { return strict_; }

 private:
  friend CitationGraph build_graph(std::vector<PaperRecord> records, const GraphOptions& opts);
  friend CitationGraph filter_edges(const CitationGraph& g,
                                    const std::function<bool(NodeId, NodeId)>& keep);
  friend CitationGraph induced_subgraph(const CitationGraph& g, int max_year);

  void index_nodes();

  std::vector<PaperRecord> records_;
  std::unordered_map<std::string, NodeId> by_id_;
  std::vector<std::vector<NodeId>> out_;
  std::vector<std::vector<NodeId>> in_;
  std::map<int, std::vector<NodeId>> year_index_;
  std::size_t edge_count_ = 0;
  std::size_t dangling_ = 0;
  std::size_t anachronistic_ = 0;
  bool strict_ = false;
};

/// Records must have unique ids (as produced by parse_dataset); a duplicate
/// id throws std::invalid_argument.
CitationGraph build_graph(std::vector<PaperRecord> records, const GraphOptions& opts = {});

/// Same nodes, only the edges for which `keep(citing, cited)` holds.
CitationGraph filter_edges(const CitationGraph& g, const std::function<bool(NodeId, NodeId)>& keep);

/// Papers published in or before `max_year` and the edges among them.
CitationGraph induced_subgraph(const CitationGraph& g, int max_year);

struct CitationSeries {
  std::string paper_id;
  int pub_year = 0;
  // counts[k] = citations received in pub_year + k.
  std::vector<int> counts;

  long total() const;
  long total_first(std::size_t years) const;
  bool operator==(const CitationSeries&) const = default;
};

/// Citations bucketed by age for ages [0, horizon_years). Citations dated
/// before the publication year are excluded. Throws NotFoundError for an
/// unknown id and std::invalid_argument for horizon_years < 1.
CitationSeries extract_series(const CitationGraph& g, std::string_view paper_id,
                              int horizon_years = 20);
CitationSeries extract_series(const CitationGraph& g, NodeId n, int horizon_years = 20);

/// The series observable by `observation_end` (inclusive): length
/// min(observation_end - pub_year + 1, max_years), or empty when the paper
/// appears after the observation end.
CitationSeries observed_series(const CitationGraph& g, NodeId n, int observation_end,
                               int max_years);

}  // namespace citeprof::ingest
