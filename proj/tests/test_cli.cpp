#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "citeprof/cli.hpp"
#include "citeprof/error.hpp"
#include "citeprof/growth_config.hpp"
#include "citeprof/ingest.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"

using namespace citeprof;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Scratch {
  fs::path dir;

  explicit Scratch(const std::string& name) : dir(fs::temp_directory_path() / ("citeprof_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }

  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(dir / name) << text;
    return dir / name;
  }
  fs::path dataset(const std::string& name, const std::vector<ingest::PaperRecord>& recs) const {
    std::ofstream out(dir / name);
    ingest::write_dataset(out, recs, ingest::Format::jsonl);
    return dir / name;
  }
};

// Runs the tool with stderr captured.
struct Invocation {
  int code = 0;
  std::string err;
};

Invocation invoke(const std::vector<std::string>& args) {
  std::ostringstream err;
  auto* old = std::cerr.rdbuf(err.rdbuf());
  Invocation r;
  r.code = cli::run(args);
  std::cerr.rdbuf(old);
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> labels_of(const fs::path& csv) {
  std::map<std::string, std::string> out;
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const auto cells = ingest::split_csv_line(line);
    if (cells && cells->size() >= 2) out[(*cells)[0]] = (*cells)[1];
  }
  return out;
}

const char* kSmallConfig = R"({"seed": 7, "replicas": 1,
  "pub_dist": {"range": [1976, 2005], "count": 100},
  "ref_dist": {"geometric_mean": 8},
  "bootstrap": {"synthetic": {"n": 600, "start_year": 1970, "years": 6}}})";

}  // namespace

TEST_CASE("classify an empty dataset") {
  Scratch s("empty");
  const auto in = s.write("empty.jsonl", "");
  const auto r = invoke({"classify", in.string(), "--out", (s.dir / "out").string()});
  CHECK(r.code == cli::kOk);
  const auto census = json::parse(slurp(s.dir / "out" / "census.json"));
  CHECK(census["labeled"] == 0);
  for (const auto& [k, v] : census["counts"].items()) CHECK(v == 0);
  CHECK(fs::exists(s.dir / "out" / "manifest.json"));
}

TEST_CASE("classify the hand-built fixture") {
  Scratch s("fixture");
  std::vector<ingest::CitationSeries> series;
  for (const auto& f : fixtures::six_profiles()) series.push_back(f.series);
  const auto in = s.dataset("six.jsonl", fixtures::records_for(series));
  REQUIRE(invoke({"classify", in.string(), "--out", (s.dir / "out").string()}).code == cli::kOk);
  const auto labels = labels_of(s.dir / "out" / "labels.csv");
  for (const auto& f : fixtures::six_profiles()) {
    CAPTURE(f.series.paper_id);
    CHECK(labels.at(f.series.paper_id) == to_string(f.expected));
  }
}

TEST_CASE("missing input and bad usage") {
  Scratch s("missing");
  auto r = invoke({"classify", (s.dir / "nope.jsonl").string(), "--out", s.dir.string()});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("input not found") != std::string::npos);

  r = invoke({"frobnicate"});
  CHECK(r.code == cli::kUsage);
  r = invoke({"simulate", (s.dir / "nope.json").string()});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("input not found") != std::string::npos);
}

TEST_CASE("a config without rho for MonDec is rejected") {
  Scratch s("rho");
  const auto cfg = s.write("cfg.json", R"({"rho": {"PeakInit": 0.7, "PeakLate": 0.5, "MonIncr": 0.3},
    "pub_dist": {"range": [1976, 1977], "count": 5}})");
  const auto r = invoke({"simulate", cfg.string(), "--out", (s.dir / "out").string()});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("rho.MonDec") != std::string::npos);
}

TEST_CASE("config overrides") {
  auto j = growth::default_growth_config();
  growth::apply_override(j, "rho.MonDec=0.4");
  growth::apply_override(j, "replicas=3");
  CHECK(j["rho"]["MonDec"] == 0.4);
  CHECK(j["replicas"] == 3);
  CHECK_THROWS_AS(growth::apply_override(j, "novalue"), ConfigError);
  j["pub_dist"] = {{"range", {1976, 1980}}, {"count", 10}};
  j["ref_dist"] = {{"geometric_mean", 5}};
  const auto cfg = growth::resolve_growth_config(j, ".", {"seed=11"});
  CHECK(cfg.params.seed == 11);
  CHECK(cfg.params.replicas == 3);
  CHECK(cfg.params.rho[Category::MonDec] == 0.4);
}

TEST_CASE("simulate twice gives identical digests and six belts") {
  Scratch s("simulate");
  const auto cfg = s.write("cfg.json", kSmallConfig);
  const auto a = s.dir / "a";
  const auto b = s.dir / "b";
  REQUIRE(invoke({"simulate", cfg.string(), "--out", a.string()}).code == cli::kOk);
  REQUIRE(invoke({"simulate", cfg.string(), "--out", b.string(), "--threads", "3"}).code == cli::kOk);
  const auto ma = json::parse(slurp(a / "manifest.json"));
  const auto mb = json::parse(slurp(b / "manifest.json"));
  CHECK(ma["outputs"] == mb["outputs"]);
  CHECK(slurp(a / "graph" / "replica_000.jsonl") == slurp(b / "graph" / "replica_000.jsonl"));

  std::set<std::string> categories;
  std::ifstream belts(a / "belts.csv");
  std::string line;
  std::getline(belts, line);
  while (std::getline(belts, line)) categories.insert(line.substr(0, line.find(',')));
  CHECK(categories.size() == 6);

  // --seed overrides the file's seed.
  const auto c = s.dir / "c";
  REQUIRE(invoke({"--seed", "8", "simulate", cfg.string(), "--out", c.string()}).code == cli::kOk);
  CHECK(slurp(a / "graph" / "replica_000.jsonl") != slurp(c / "graph" / "replica_000.jsonl"));
}

TEST_CASE("analyze kshell on a 4-cycle") {
  Scratch s("kshell");
  std::vector<ingest::PaperRecord> recs(4);
  const char* ids[] = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i) {
    recs[static_cast<std::size_t>(i)].id = ids[i];
    recs[static_cast<std::size_t>(i)].year = 2000;
    recs[static_cast<std::size_t>(i)].references = {ids[(i + 1) % 4]};
  }
  const auto in = s.dataset("cycle.jsonl", recs);
  REQUIRE(invoke({"analyze", in.string(), "--which", "kshell", "--out", (s.dir / "out").string()}).code == cli::kOk);
  std::ifstream shells(s.dir / "out" / "shells.csv");
  std::string line;
  std::getline(shells, line);
  CHECK(line == "paper_id,shell,broad_shell");
  int rows = 0;
  while (std::getline(shells, line)) {
    ++rows;
    CHECK(line.substr(line.find(',')) == ",1,1");
  }
  CHECK(rows == 4);

  // The kshell shorthand writes the same file.
  REQUIRE(invoke({"kshell", in.string(), "--out", (s.dir / "short").string()}).code == cli::kOk);
  CHECK(slurp(s.dir / "out" / "shells.csv") == slurp(s.dir / "short" / "shells.csv"));
}

TEST_CASE("self-citation analysis needs authors") {
  Scratch s("selfcite");
  std::vector<ingest::CitationSeries> series;
  for (const auto& f : fixtures::six_profiles()) series.push_back(f.series);
  const auto in = s.dataset("anon.jsonl", fixtures::records_for(series));
  auto r = invoke({"analyze", in.string(), "--which", "selfcite", "--out", (s.dir / "out").string()});
  CHECK(r.code == cli::kMissingData);
  CHECK(r.err.find("authors") != std::string::npos);

  r = invoke({"analyze", in.string(), "--out", (s.dir / "all").string()});
  CHECK(r.code == cli::kMissingData);
  CHECK(fs::exists(s.dir / "all" / "shells.csv"));
  CHECK(fs::exists(s.dir / "all" / "flows.csv"));
  CHECK_FALSE(fs::exists(s.dir / "all" / "confusion.csv"));
}

TEST_CASE("analyze with authors writes every artifact") {
  Scratch s("analyze");
  std::vector<ingest::CitationSeries> series;
  for (const auto& f : fixtures::six_profiles()) series.push_back(f.series);
  auto recs = fixtures::records_for(series);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].authors = {"au" + std::to_string(i % 7)};
  const auto in = s.dataset("authored.jsonl", recs);
  const auto out = s.dir / "out";
  REQUIRE(invoke({"analyze", in.string(), "--out", out.string()}).code == cli::kOk);
  for (const char* f : {"buckets.csv", "venue.csv", "confusion.csv", "selfcite_timing.csv", "flows.csv", "shells.csv",
                        "core.csv", "peakstats.json", "degrees.csv"}) {
    CAPTURE(std::string(f));
    CHECK(fs::exists(out / f));
  }
  const auto manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest["command"] == "analyze");
  CHECK(manifest["inputs"].size() == 1);
}
