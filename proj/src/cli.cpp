#include "citeprof/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "citeprof/error.hpp"
#include "citeprof/export.hpp"
#include "citeprof/growth.hpp"
#include "citeprof/growth_config.hpp"
#include "citeprof/ingest.hpp"
#include "citeprof/netanalysis.hpp"
#include "citeprof/profile.hpp"
#include "citeprof/report.hpp"

namespace citeprof::cli {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const std::vector<std::string> kAnalyses = {"buckets", "venue",   "selfcite", "stability",
                                            "kshell",  "peakstats", "belts",  "degrees"};

struct Globals {
  std::optional<std::uint64_t> seed;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  std::string out = ".";
  std::optional<std::string> format;
  std::vector<std::string> sets;
  std::optional<std::string> config;
  bool strict_chronology = false;
};

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("input not found: " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Collects outputs under one directory and records them in the manifest.
class Run {
 public:
  Run(std::string command, const Globals& g) : command_(std::move(command)), dir_(g.out), seed_(g.seed) {
    fs::create_directories(dir_);
  }

  void add_input(const fs::path& p) {
    const auto bytes = slurp(p);
    inputs_.push_back({{"path", p.generic_string()}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a64(bytes)}});
  }

  void write(const std::string& relative, const std::function<void(std::ostream&)>& body) {
    std::ostringstream ss;
    body(ss);
    const auto bytes = ss.str();
    const fs::path target = dir_ / relative;
    fs::create_directories(target.parent_path());
    std::ofstream out(target, std::ios::binary);
    if (!out) throw IoError("cannot write " + target.string());
    out << bytes;
    if (!out) throw IoError("write failed: " + target.string());
    outputs_.push_back({{"path", relative}, {"bytes", bytes.size()}, {"fnv1a64", fnv1a64(bytes)}});
  }

  void write_json(const std::string& relative, const ordered_json& j) {
    write(relative, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }

  void set_seed(std::uint64_t s) { seed_ = s; }
  void set_config(json config) { config_ = std::move(config); }

  void finish() {
    ordered_json m;
    m["command"] = command_;
    m["tool_version"] = std::string(kVersion);
    m["seed"] = seed_ ? json(*seed_) : json(nullptr);
    m["config"] = config_;
    m["inputs"] = inputs_;
    m["outputs"] = outputs_;
    std::ofstream out(dir_ / "manifest.json", std::ios::binary);
    out << m.dump(2) << '\n';
  }

 private:
  std::string command_;
  fs::path dir_;
  std::optional<std::uint64_t> seed_;
  json config_ = json::object();
  ordered_json inputs_ = ordered_json::array();
  ordered_json outputs_ = ordered_json::array();
};

json load_config(const Globals& g) {
  json config = g.config ? growth::read_json_file(*g.config) : json::object();
  return config;
}

std::optional<ingest::Format> dataset_format(const Globals& g) {
  if (!g.format) return std::nullopt;
  return ingest::parse_format(*g.format);
}

template <typename T>
void read_field(const json& obj, const char* key, T& field, const std::string& section) {
  if (!obj.contains(key)) return;
  try {
    field = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(section + "." + key, "has the wrong type");
  }
}

struct ClassifySettings {
  profile::ClassifierConfig cfg;
  std::optional<int> observation_end;
  json resolved;
};

ClassifySettings classifier_settings(json config, const std::vector<std::string>& sets) {
  for (const auto& s : sets) growth::apply_override(config, s);
  ClassifySettings out;
  json section = config.contains("classifier") ? config["classifier"] : json::object();
  if (!section.is_object()) throw ConfigError("classifier", "must be an object");
  auto& c = out.cfg;
  read_field(section, "min_history_years", c.min_history_years, "classifier");
  read_field(section, "max_window_years", c.max_window_years, "classifier");
  read_field(section, "oth_citation_threshold", c.oth_citation_threshold, "classifier");
  read_field(section, "smoothing_window", c.smoothing_window, "classifier");
  read_field(section, "peak_height_fraction", c.peak_height_fraction, "classifier");
  read_field(section, "min_peak_height", c.min_peak_height, "classifier");
  read_field(section, "peak_min_separation", c.peak_min_separation, "classifier");
  read_field(section, "early_peak_bound", c.early_peak_bound, "classifier");
  read_field(section, "monotone_tolerance", c.monotone_tolerance, "classifier");
  if (section.contains("observation_end")) {
    int end = 0;
    read_field(section, "observation_end", end, "classifier");
    out.observation_end = end;
  }
  c.validate();
  config["classifier"] = {{"min_history_years", c.min_history_years},
                          {"max_window_years", c.max_window_years},
                          {"oth_citation_threshold", c.oth_citation_threshold},
                          {"smoothing_window", c.smoothing_window},
                          {"peak_height_fraction", c.peak_height_fraction},
                          {"min_peak_height", c.min_peak_height},
                          {"peak_min_separation", c.peak_min_separation},
                          {"early_peak_bound", c.early_peak_bound},
                          {"monotone_tolerance", c.monotone_tolerance},
                          {"observation_end", out.observation_end ? json(*out.observation_end) : json(nullptr)}};
  out.resolved = std::move(config);
  return out;
}

ingest::CitationGraph load_graph(const std::string& path, const Globals& g, Run& run,
                                 ingest::IngestReport* report = nullptr) {
  auto parsed = ingest::read_dataset(path, dataset_format(g));
  run.add_input(path);
  if (report) *report = parsed.report;
  return ingest::build_graph(std::move(parsed.records), {g.strict_chronology});
}

ordered_json ingest_json(const ingest::IngestReport& r, const ingest::CitationGraph& graph) {
  ordered_json rejected = ordered_json::array();
  for (const auto& x : r.rejections) {
    rejected.push_back({{"line", x.line}, {"reason", std::string(ingest::to_string(x.reason))}, {"detail", x.detail}});
  }
  return {{"accepted", r.accepted},
          {"rejected", rejected},
          {"dropped_self_references", r.dropped_self_references},
          {"dropped_duplicate_references", r.dropped_duplicate_references},
          {"edges", graph.edge_count()},
          {"dangling_references", graph.dangling_references()},
          {"anachronistic_edges", graph.anachronistic_edges()}};
}

int cmd_classify(const std::string& input, const Globals& g) {
  auto settings = classifier_settings(load_config(g), g.sets);
  Run run("classify", g);
  ingest::IngestReport report;
  const auto graph = load_graph(input, g, run, &report);
  const auto labels = profile::classify_corpus(graph, settings.cfg, {settings.observation_end, g.threads});
  run.set_config(settings.resolved);
  run.write("labels.csv", [&](std::ostream& o) { output::write_labels_csv(o, labels); });
  run.write_json("census.json", output::census_json(labels.census));
  run.write_json("ingest.json", ingest_json(report, graph));
  run.finish();
  return kOk;
}

std::string replica_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "replica_%03zu", i);
  return buf;
}

int cmd_simulate(const std::string& config_path, const Globals& g) {
  auto overrides = g.sets;
  if (g.seed) overrides.push_back("seed=" + std::to_string(*g.seed));
  const json file = growth::read_json_file(config_path);
  auto cfg = growth::resolve_growth_config(file, fs::path(config_path).parent_path(), overrides);
  cfg.options.threads = g.threads;

  Run run("simulate", g);
  run.add_input(config_path);
  for (const auto& p : cfg.input_files) run.add_input(p);
  run.set_seed(cfg.params.seed);
  run.set_config(cfg.resolved);

  const auto result = growth::simulate(cfg.inputs, cfg.params, cfg.options);

  PerCategory<std::vector<std::vector<double>>> pooled;
  ordered_json replicas = ordered_json::array();
  const auto fmt = dataset_format(g).value_or(ingest::Format::jsonl);
  for (std::size_t i = 0; i < result.replicas.size(); ++i) {
    const auto& r = result.replicas[i];
    auto series = growth::profile_series(r, cfg.options);
    for (auto c : kAllCategories) {
      for (auto& s : series[c]) pooled[c].push_back(std::move(s));
    }
    const auto name = "graph/" + replica_name(i);
    run.write(name + (fmt == ingest::Format::csv ? ".csv" : ".jsonl"), [&](std::ostream& o) {
      ingest::write_dataset(o, r.graph.records(), fmt);
    });
    run.write(name + "_edges.jsonl", [&](std::ostream& o) { output::write_edges_jsonl(o, r.graph); });
    run.write(name + "_nodes.csv", [&](std::ostream& o) { output::write_nodes_csv(o, r.graph); });
    long drawn = 0;
    for (int k : r.sampled_reference_counts) drawn += k;
    replicas.push_back({{"replica", i},
                        {"seed", r.seed},
                        {"papers", r.graph.node_count()},
                        {"edges", r.graph.edge_count()},
                        {"first_simulated_year", r.first_simulated_year},
                        {"last_year", r.last_year},
                        {"references_drawn", drawn},
                        {"truncated_reference_lists", r.truncated_reference_lists}});
  }

  PerCategory<report::CitationBelt> belts;
  report::BeltOptions belt_opts;
  belt_opts.min_papers_per_age = std::max<std::size_t>(cfg.options.profile_min_papers, 1);
  for (auto c : kAllCategories) belts[c] = report::citation_belt(pooled[c], belt_opts);

  run.write("profiles.csv", [&](std::ostream& o) { output::write_profiles_csv(o, result.profiles); });
  run.write("belts.csv", [&](std::ostream& o) { output::write_belts_csv(o, belts); });
  ordered_json low = ordered_json::object();
  for (auto c : kAllCategories) low[std::string(to_string(c))] = belts[c].low_sample;
  run.write_json("summary.json", {{"replicas", replicas}, {"low_sample_belts", low}});
  run.finish();
  return kOk;
}

struct AnalyzeArgs {
  std::string graph;
  std::optional<std::string> labels;
  std::optional<std::string> reference;
  std::vector<std::string> which;
  std::vector<int> core_years;
  std::vector<int> horizons{10, 15, 20};
  std::vector<int> thresholds = netanalysis::default_threshold_sweep();
};

int cmd_analyze(const AnalyzeArgs& a, const Globals& g) {
  auto settings = classifier_settings(load_config(g), g.sets);
  std::set<std::string> which(a.which.begin(), a.which.end());
  if (which.empty()) which.insert(kAnalyses.begin(), kAnalyses.end());

  Run run("analyze", g);
  const auto graph = load_graph(a.graph, g, run);
  const profile::CorpusOptions corpus_opts{settings.observation_end, g.threads};
  auto labels = profile::classify_corpus(graph, settings.cfg, corpus_opts);

  std::size_t overridden = 0, unmatched = 0;
  if (a.labels) {
    std::ifstream in(*a.labels);
    if (!in) throw IoError("input not found: " + *a.labels);
    run.add_input(*a.labels);
    for (const auto& [id, cat] : output::read_labels_csv(in)) {
      auto it = std::lower_bound(labels.papers.begin(), labels.papers.end(), id,
                                 [](const profile::LabeledPaper& p, const std::string& x) { return p.paper_id < x; });
      if (it == labels.papers.end() || it->paper_id != id) {
        ++unmatched;
        continue;
      }
      it->result.category = cat;
      ++overridden;
    }
    labels.census.counts = {};
    for (const auto& p : labels.papers) ++labels.census.counts[p.result.category];
  }

  auto resolved = settings.resolved;
  resolved["analyze"] = {{"which", std::vector<std::string>(which.begin(), which.end())},
                         {"core_years", a.core_years},
                         {"horizons", a.horizons},
                         {"thresholds", a.thresholds},
                         {"labels_overridden", overridden},
                         {"labels_unmatched", unmatched}};
  run.set_config(resolved);

  std::optional<CapabilityError> missing;
  auto label_of = [&](ingest::NodeId n) -> std::optional<Category> {
    const auto* p = labels.find(graph.id(n));
    return p ? std::optional<Category>(p->result.category) : std::nullopt;
  };

  if (which.contains("buckets")) {
    const auto b = netanalysis::citation_bucket_histogram(labels);
    run.write("buckets.csv", [&](std::ostream& o) { output::write_buckets_csv(o, b); });
  }
  if (which.contains("venue")) {
    const auto v = netanalysis::venue_year_composition(labels, graph);
    run.write("venue.csv", [&](std::ostream& o) { output::write_venue_csv(o, v); });
  }
  if (which.contains("selfcite")) {
    if (!netanalysis::has_authors(graph)) {
      missing.emplace("authors", "selfcite needs author lists; no record in " + a.graph + " has authors");
    } else {
      const auto stripped = netanalysis::strip_self_citations(graph);
      const auto rep = netanalysis::self_citation_confusion(graph, settings.cfg, a.thresholds, corpus_opts);
      run.write("confusion.csv", [&](std::ostream& o) { output::write_confusion_csv(o, rep); });
      run.write("selfcite_timing.csv", [&](std::ostream& o) { output::write_timing_csv(o, rep); });
      run.write("selfcite_removed.csv", [&](std::ostream& o) { output::write_removed_edges_csv(o, stripped); });
    }
  }
  if (which.contains("stability")) {
    netanalysis::StabilityOptions so;
    so.horizons = a.horizons;
    so.observation_end = settings.observation_end;
    const auto flow = netanalysis::stability_flows(graph, settings.cfg, so);
    run.write("flows.csv", [&](std::ostream& o) { output::write_flows_csv(o, flow); });
  }
  if (which.contains("kshell")) {
    const auto shells = netanalysis::kshell_decompose(graph);
    run.write("shells.csv", [&](std::ostream& o) { output::write_shells_csv(o, graph, shells); });
    auto years = a.core_years;
    if (years.empty() && graph.last_year()) {
      // Four snapshots over the last decade.
      for (int back : {10, 6, 2, 0}) {
        const int y = *graph.last_year() - back;
        if (y >= *graph.first_year()) years.push_back(y);
      }
    }
    if (!years.empty()) {
      std::sort(years.begin(), years.end());
      years.erase(std::unique(years.begin(), years.end()), years.end());
      const auto first = ingest::induced_subgraph(graph, years.front());
      auto first_opts = corpus_opts;
      first_opts.observation_end = years.front();
      const auto first_labels = profile::classify_corpus(first, settings.cfg, first_opts);
      const auto rows = netanalysis::core_periphery_evolution(graph, first_labels, years);
      run.write("core.csv", [&](std::ostream& o) { output::write_core_csv(o, rows); });
    }
  }
  if (which.contains("peakstats")) {
    run.write_json("peakstats.json", output::peakstats_json(netanalysis::peakmul_statistics(labels.papers)));
  }
  if (which.contains("belts")) {
    PerCategory<std::vector<std::vector<double>>> series;
    for (const auto& p : labels.papers) series[p.result.category].push_back(p.result.normalized);
    PerCategory<report::CitationBelt> belts;
    for (auto c : kAllCategories) belts[c] = report::citation_belt(series[c]);
    run.write("belts.csv", [&](std::ostream& o) { output::write_belts_csv(o, belts); });
  }
  if (which.contains("degrees")) {
    const auto dists = report::indegree_distributions(graph, label_of);
    run.write("degrees.csv", [&](std::ostream& o) { output::write_degrees_csv(o, dists); });
    if (a.reference) {
      const auto ref = load_graph(*a.reference, g, run);
      const auto ref_labels = profile::classify_corpus(ref, settings.cfg, {std::nullopt, g.threads});
      const auto ref_dists = report::indegree_distributions(ref, [&](ingest::NodeId n) -> std::optional<Category> {
        const auto* p = ref_labels.find(ref.id(n));
        return p ? std::optional<Category>(p->result.category) : std::nullopt;
      });
      run.write_json("comparison.json", output::comparison_json(dists, ref_dists));
    }
  }
  run.finish();
  if (missing) {
    std::cerr << "citeprof: missing field '" << missing->field() << "': " << missing->what() << '\n';
    return kMissingData;
  }
  return kOk;
}

void add_globals(CLI::App& app, Globals& g) {
  app.add_option("--seed", g.seed, "Master RNG seed");
  app.add_option("--threads", g.threads, "Worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "Dataset format")->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--set", g.sets, "Config override key=value (dotted path); repeatable");
  app.add_option("--config", g.config, "JSON configuration file");
  app.add_flag("--strict-chronology", g.strict_chronology, "Drop citations to newer papers at ingest");
}

void add_analyze_options(CLI::App& sub, AnalyzeArgs& a, bool with_which) {
  sub.add_option("graph", a.graph, "Dataset (jsonl or csv)")->required();
  sub.add_option("--labels", a.labels, "Labels CSV whose categories replace the computed ones");
  if (with_which) {
    sub.add_option("--which", a.which, "Analyses to run (default: all)")
        ->delimiter(',')
        ->check(CLI::IsMember(kAnalyses));
  }
  sub.add_option("--reference", a.reference, "Second dataset for in-degree comparison");
  sub.add_option("--core-years", a.core_years,
                 "Years of the core-periphery snapshots (default: four over the last decade)")
      ->delimiter(',');
  sub.add_option("--horizons", a.horizons, "Stability horizons in years")->delimiter(',');
  sub.add_option("--thresholds", a.thresholds, "Oth thresholds for the self-citation sweep")->delimiter(',');
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Citation-profile classification, growth simulation and network analyses", "citeprof"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));
  Globals g;
  add_globals(app, g);

  std::string input, config_path;
  AnalyzeArgs analyze_args, kshell_args, selfcite_args;

  auto* classify = app.add_subcommand("classify", "Label every eligible paper of a dataset");
  classify->add_option("input", input, "Dataset (jsonl or csv)")->required();
  auto* simulate = app.add_subcommand("simulate", "Run the growth model");
  simulate->add_option("config", config_path, "Growth configuration (JSON)")->required();
  auto* analyze = app.add_subcommand("analyze", "Run corpus analyses on a dataset");
  add_analyze_options(*analyze, analyze_args, true);
  auto* kshell = app.add_subcommand("kshell", "Shorthand for analyze --which kshell");
  add_analyze_options(*kshell, kshell_args, false);
  auto* selfcite = app.add_subcommand("selfcite", "Shorthand for analyze --which selfcite");
  add_analyze_options(*selfcite, selfcite_args, false);
  for (auto* sub : {classify, simulate, analyze, kshell, selfcite}) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*classify) return cmd_classify(input, g);
    if (*simulate) return cmd_simulate(config_path, g);
    if (*analyze) return cmd_analyze(analyze_args, g);
    if (*kshell) {
      kshell_args.which = {"kshell"};
      return cmd_analyze(kshell_args, g);
    }
    if (*selfcite) {
      selfcite_args.which = {"selfcite"};
      return cmd_analyze(selfcite_args, g);
    }
  } catch (const ConfigError& e) {
    std::cerr << "citeprof: invalid configuration: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "citeprof: " << e.what() << '\n';
    return kUsage;
  } catch (const FormatError& e) {
    std::cerr << "citeprof: " << e.what() << '\n';
    return kUsage;
  } catch (const CapabilityError& e) {
    std::cerr << "citeprof: missing field '" << e.field() << "': " << e.what() << '\n';
    return kMissingData;
  } catch (const std::exception& e) {
    std::cerr << "citeprof: internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace citeprof::cli
