#include "citeprof/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "citeprof/error.hpp"

namespace citeprof::ingest {

using nlohmann::json;

std::string_view to_string(VenueType v) {
  switch (v) {
    case VenueType::conference: return "conference";
    case VenueType::journal: return "journal";
    case VenueType::unknown: break;
  }
  return "unknown";
}

std::optional<VenueType> parse_venue(std::string_view s) {
  if (s == "conference") return VenueType::conference;
  if (s == "journal") return VenueType::journal;
  if (s == "unknown" || s.empty()) return VenueType::unknown;
  return std::nullopt;
}

std::optional<Format> parse_format(std::string_view s) {
  if (s == "jsonl") return Format::jsonl;
  if (s == "csv") return Format::csv;
  return std::nullopt;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::malformed: return "malformed";
    case RejectReason::missing_id: return "missing id";
    case RejectReason::bad_year: return "bad year";
    case RejectReason::duplicate_id: return "duplicate id";
  }
  return "malformed";
}

std::size_t IngestReport::count(RejectReason r) const {
  return static_cast<std::size_t>(std::count_if(
      rejections.begin(), rejections.end(), [r](const Rejection& x) { return x.reason == r; }));
}

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  bool at_start = true;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"' && at_start) {
      quoted = true;
      at_start = false;
    } else if (ch == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
      at_start = true;
    } else {
      cur.push_back(ch);
      at_start = false;
    }
  }
  if (quoted) return std::nullopt;
  cells.push_back(std::move(cur));
  return cells;
}

namespace {

// Thrown inside the per-record parsers; caught and turned into a Rejection.
struct RecordError {
  RejectReason reason;
  std::string detail;
};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t extra = 0;
    if (c < 0x80) {
      extra = 0;
    } else if ((c >> 5) == 0x6 && c >= 0xC2) {
      extra = 1;
    } else if ((c >> 4) == 0xE) {
      extra = 2;
    } else if ((c >> 3) == 0x1E && c <= 0xF4) {
      extra = 3;
    } else {
      return false;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      if (i + k >= s.size()) return false;
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += extra + 1;
  }
  return true;
}

std::optional<int> parse_int(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  int value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

int checked_year(std::optional<int> year, std::string_view raw, const IngestOptions& opts) {
  if (!year) throw RecordError{RejectReason::bad_year, std::string(raw)};
  if (*year < opts.min_year || *year > opts.max_year) {
    throw RecordError{RejectReason::bad_year, std::to_string(*year) + " outside window"};
  }
  return *year;
}

std::vector<std::string> string_list(const json& obj, const char* key) {
  std::vector<std::string> out;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return out;
  if (!it->is_array()) throw RecordError{RejectReason::malformed, std::string(key) + " not a list"};
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw RecordError{RejectReason::malformed, std::string(key) + " entry not a string"};
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

PaperRecord record_from_json(std::string_view line, const IngestOptions& opts) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::exception& e) {
    throw RecordError{RejectReason::malformed, e.what()};
  }
  if (!obj.is_object()) throw RecordError{RejectReason::malformed, "not an object"};

  PaperRecord rec;
  auto id = obj.find("id");
  if (id == obj.end() || id->is_null() || (id->is_string() && id->get_ref<const std::string&>().empty())) {
    throw RecordError{RejectReason::missing_id, ""};
  }
  if (!id->is_string()) throw RecordError{RejectReason::malformed, "id not a string"};
  rec.id = id->get<std::string>();

  auto year = obj.find("year");
  if (year == obj.end()) throw RecordError{RejectReason::bad_year, "missing"};
  if (year->is_number_integer()) {
    rec.year = checked_year(year->get<int>(), "", opts);
  } else if (year->is_string()) {
    const auto& s = year->get_ref<const std::string&>();
    rec.year = checked_year(parse_int(s), s, opts);
  } else {
    throw RecordError{RejectReason::bad_year, year->dump()};
  }

  if (auto v = obj.find("venue_type"); v != obj.end() && !v->is_null()) {
    if (!v->is_string()) throw RecordError{RejectReason::malformed, "venue_type not a string"};
    auto venue = parse_venue(v->get_ref<const std::string&>());
    if (!venue) throw RecordError{RejectReason::malformed, "unknown venue_type"};
    rec.venue = *venue;
  }
  rec.fields = string_list(obj, "fields");
  rec.authors = string_list(obj, "authors");
  rec.references = string_list(obj, "references");

  if (auto c = obj.find("category"); c != obj.end() && !c->is_null()) {
    if (!c->is_string()) throw RecordError{RejectReason::malformed, "category not a string"};
    rec.category = parse_category(c->get_ref<const std::string&>());
    if (!rec.category) throw RecordError{RejectReason::malformed, "unknown category"};
  }
  return rec;
}

std::vector<std::string> split_inner(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(';', start);
    auto piece = s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
    if (!piece.empty()) out.emplace_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

struct CsvColumns {
  std::ptrdiff_t id = -1, year = -1, venue = -1, fields = -1, authors = -1, references = -1,
                 category = -1;
  std::size_t width = 0;
};

CsvColumns csv_columns(const std::vector<std::string>& header) {
  CsvColumns cols;
  cols.width = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto& h = header[i];
    const auto idx = static_cast<std::ptrdiff_t>(i);
    if (h == "id") cols.id = idx;
    else if (h == "year") cols.year = idx;
    else if (h == "venue_type") cols.venue = idx;
    else if (h == "fields") cols.fields = idx;
    else if (h == "authors") cols.authors = idx;
    else if (h == "references") cols.references = idx;
    else if (h == "category") cols.category = idx;
  }
  if (cols.id < 0 || cols.year < 0 || cols.references < 0) {
    throw FormatError("csv header must contain at least id, year and references");
  }
  return cols;
}

PaperRecord record_from_csv(std::string_view line, const CsvColumns& cols,
                            const IngestOptions& opts) {
  if (!valid_utf8(line)) throw RecordError{RejectReason::malformed, "invalid UTF-8"};
  auto cells = split_csv_line(line);
  if (!cells) throw RecordError{RejectReason::malformed, "unterminated quote"};
  if (cells->size() != cols.width) throw RecordError{RejectReason::malformed, "column count"};
  auto cell = [&](std::ptrdiff_t idx) -> std::string_view {
    return idx < 0 ? std::string_view{} : std::string_view((*cells)[static_cast<std::size_t>(idx)]);
  };

  PaperRecord rec;
  rec.id = std::string(cell(cols.id));
  if (rec.id.empty()) throw RecordError{RejectReason::missing_id, ""};
  rec.year = checked_year(parse_int(cell(cols.year)), cell(cols.year), opts);
  auto venue = parse_venue(cell(cols.venue));
  if (!venue) throw RecordError{RejectReason::malformed, "unknown venue_type"};
  rec.venue = *venue;
  rec.fields = split_inner(cell(cols.fields));
  rec.authors = split_inner(cell(cols.authors));
  rec.references = split_inner(cell(cols.references));
  if (auto c = cell(cols.category); !c.empty()) {
    rec.category = parse_category(c);
    if (!rec.category) throw RecordError{RejectReason::malformed, "unknown category"};
  }
  return rec;
}

void clean_references(PaperRecord& rec, IngestReport& report) {
  std::unordered_set<std::string> seen;
  std::vector<std::string> kept;
  kept.reserve(rec.references.size());
  for (auto& r : rec.references) {
    if (r == rec.id) {
      ++report.dropped_self_references;
    } else if (!seen.insert(r).second) {
      ++report.dropped_duplicate_references;
    } else {
      kept.push_back(std::move(r));
    }
  }
  rec.references = std::move(kept);
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

}  // namespace

ParsedDataset parse_dataset(std::istream& in, Format format, const IngestOptions& opts) {
  if (!in) throw IoError("input stream is not readable");

  ParsedDataset out;
  std::unordered_set<std::string> seen_ids;
  std::optional<CsvColumns> cols;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank(line)) continue;
    if (format == Format::csv && !cols) {
      auto header = split_csv_line(line);
      if (!header) throw FormatError("unreadable csv header");
      cols = csv_columns(*header);
      continue;
    }
    try {
      PaperRecord rec = format == Format::jsonl ? record_from_json(line, opts)
                                                : record_from_csv(line, *cols, opts);
      if (!seen_ids.insert(rec.id).second) {
        throw RecordError{RejectReason::duplicate_id, rec.id};
      }
      clean_references(rec, out.report);
      out.records.push_back(std::move(rec));
    } catch (const RecordError& e) {
      out.report.rejections.push_back({line_no, e.reason, e.detail});
    }
  }
  if (in.bad()) throw IoError("read error on input stream");
  out.report.accepted = out.records.size();
  return out;
}

ParsedDataset read_dataset(const std::filesystem::path& path, std::optional<Format> format,
                           const IngestOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("input not found: " + path.string());
  if (!format) format = path.extension() == ".csv" ? Format::csv : Format::jsonl;
  return parse_dataset(in, *format, opts);
}

std::string csv_quote(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

namespace {

std::string join_inner(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out.push_back(';');
    out += xs[i];
  }
  return out;
}

}  // namespace

void write_dataset(std::ostream& out, std::span<const PaperRecord> records, Format format) {
  if (format == Format::jsonl) {
    for (const auto& r : records) {
      nlohmann::ordered_json j;
      j["id"] = r.id;
      j["year"] = r.year;
      j["venue_type"] = std::string(to_string(r.venue));
      j["fields"] = r.fields;
      j["authors"] = r.authors;
      j["references"] = r.references;
      if (r.category) j["category"] = std::string(to_string(*r.category));
      out << j.dump() << '\n';
    }
    return;
  }
  const bool with_category =
      std::any_of(records.begin(), records.end(), [](const auto& r) { return r.category.has_value(); });
  out << "id,year,venue_type,fields,authors,references" << (with_category ? ",category" : "") << '\n';
  for (const auto& r : records) {
    out << csv_quote(r.id) << ',' << r.year << ',' << to_string(r.venue) << ','
        << csv_quote(join_inner(r.fields)) << ',' << csv_quote(join_inner(r.authors)) << ','
        << csv_quote(join_inner(r.references));
    if (with_category) out << ',' << (r.category ? to_string(*r.category) : "");
    out << '\n';
  }
}

}  // namespace citeprof::ingest
