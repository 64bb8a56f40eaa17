#include "citeprof/growth_config.hpp"

#include <fstream>
#include <sstream>

#include "citeprof/error.hpp"

namespace citeprof::growth {

using nlohmann::json;

namespace {

// Stream of the bootstrap generator, kept apart from the replica streams.
constexpr std::uint64_t kBootstrapStream = 0xB0075;

json category_object(const PerCategory<double>& v, std::initializer_list<Category> which) {
  json out = json::object();
  for (auto c : which) out[std::string(to_string(c))] = v[c];
  return out;
}

template <typename T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path, "has the wrong type");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

int parse_int_key(const std::string& key, const std::string& path) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(key, &used);
    if (used == key.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(path + "." + key, "key is not an integer");
}

std::map<int, int> parse_pub_dist(const json& j) {
  std::map<int, int> out;
  if (!j.is_object()) throw ConfigError("pub_dist", "must be an object");
  if (j.contains("range")) {
    const auto& r = j["range"];
    if (!r.is_array() || r.size() != 2) throw ConfigError("pub_dist.range", "must be [first, last]");
    const int lo = get_as<int>(r[0], "pub_dist.range");
    const int hi = get_as<int>(r[1], "pub_dist.range");
    const int n = get_as<int>(require(j, "count", "pub_dist"), "pub_dist.count");
    if (hi < lo) throw ConfigError("pub_dist.range", "last year before first");
    for (int y = lo; y <= hi; ++y) out[y] = n;
    return out;
  }
  for (const auto& [key, value] : j.items()) {
    out[parse_int_key(key, "pub_dist")] = get_as<int>(value, "pub_dist." + key);
  }
  return out;
}

IntDistribution parse_int_distribution(const json& j, const std::string& path) {
  std::vector<std::pair<int, double>> pmf;
  if (j.is_object() && j.contains("geometric_mean")) {
    const double m = get_as<double>(j["geometric_mean"], path + ".geometric_mean");
    const int cap = j.contains("cap") ? get_as<int>(j["cap"], path + ".cap") : 400;
    if (!(m >= 0.0) || cap < 0) throw ConfigError(path, "geometric mean and cap must be >= 0");
    return geometric_distribution(m, cap);
  }
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      pmf.emplace_back(parse_int_key(key, path), get_as<double>(value, path + "." + key));
    }
  } else if (j.is_array()) {
    for (const auto& pair : j) {
      if (!pair.is_array() || pair.size() != 2) throw ConfigError(path, "entries must be [value, probability]");
      pmf.emplace_back(get_as<int>(pair[0], path), get_as<double>(pair[1], path));
    }
  } else {
    throw ConfigError(path, "must be an object or an array of pairs");
  }
  try {
    return IntDistribution(std::move(pmf));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

Categorical<std::pair<int, int>> parse_pair_distribution(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "must be an array of [[t1, t2], probability]");
  std::vector<std::pair<std::pair<int, int>, double>> pmf;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_array() || e[0].size() != 2) {
      throw ConfigError(path, "entries must be [[t1, t2], probability]");
    }
    pmf.push_back({{get_as<int>(e[0][0], path), get_as<int>(e[0][1], path)}, get_as<double>(e[1], path)});
  }
  try {
    return Categorical<std::pair<int, int>>(std::move(pmf));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

PerCategory<double> parse_fractions(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "must be an object keyed by category");
  PerCategory<double> out;
  for (const auto& [key, value] : j.items()) {
    auto c = parse_category(key);
    if (!c) throw ConfigError(path + "." + key, "unknown category");
    out[*c] = get_as<double>(value, path + "." + key);
  }
  return out;
}

std::vector<ingest::PaperRecord> parse_inline_records(const json& j) {
  if (!j.is_array()) throw ConfigError("bootstrap.records", "must be an array");
  std::stringstream lines;
  for (const auto& r : j) lines << r.dump() << '\n';
  auto parsed = ingest::parse_dataset(lines, ingest::Format::jsonl);
  if (parsed.report.rejected() > 0) {
    const auto& first = parsed.report.rejections.front();
    throw ConfigError("bootstrap.records", "record " + std::to_string(first.line) + ": " +
                                               std::string(ingest::to_string(first.reason)));
  }
  return std::move(parsed.records);
}

}  // namespace

json default_growth_config() {
  const auto p = GrowthParams::defaults();
  json tau = json::object();
  for (auto c : kAllCategories) tau[std::string(to_string(c))] = p.tau[c];
  json fractions = json::object();
  const auto f = SyntheticBootstrap::empirical_fractions();
  for (auto c : kAllCategories) fractions[std::string(to_string(c))] = f[c];
  const SyntheticBootstrap sb;
  const SimulateOptions so;
  return json{
      {"seed", p.seed},
      {"replicas", p.replicas},
      {"rho", category_object(p.rho, {Category::MonDec, Category::PeakInit, Category::PeakLate,
                                      Category::MonIncr})},
      {"tau", tau},
      {"peak_time_dist", json::object()},
      {"bootstrap",
       {{"synthetic",
         {{"n", sb.papers}, {"start_year", sb.start_year}, {"years", sb.years}, {"fractions", fractions}}}}},
      {"profile",
       {{"min_history", so.profile_min_history},
        {"max_window", so.profile_max_window},
        {"smoothing_window", so.profile_smoothing_window},
        {"min_papers", so.profile_min_papers}}},
  };
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string(assignment), "override must look like key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &config;
  std::string walked;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty path component");
    walked += (walked.empty() ? "" : ".") + part;
    if (node->is_null()) *node = json::object();
    if (!node->is_object()) throw ConfigError(walked, "cannot set a field inside a non-object");
    node = &(*node)[part];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = std::move(value);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("input not found: " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError(path.string(), "not a JSON object");
  return j;
}

GrowthConfig resolve_growth_config(json config, const std::filesystem::path& base_dir,
                                   const std::vector<std::string>& overrides) {
  if (!config.is_object()) throw ConfigError("", "configuration must be a JSON object");
  const json defaults_json = default_growth_config();
  for (const auto& [key, value] : defaults_json.items()) {
    if (!config.contains(key)) config[key] = value;
  }
  for (const auto& o : overrides) apply_override(config, o);

  GrowthConfig out;
  auto& params = out.params;
  params.seed = get_as<std::uint64_t>(config["seed"], "seed");
  params.replicas = get_as<int>(config["replicas"], "replicas");

  for (auto c : {Category::MonDec, Category::PeakInit, Category::PeakLate, Category::MonIncr}) {
    const std::string name(to_string(c));
    params.rho[c] = get_as<double>(require(config["rho"], name, "rho"), "rho." + name);
  }
  const auto defaults = GrowthParams::defaults();
  for (auto c : kAllCategories) {
    const std::string name(to_string(c));
    const auto& tau = config["tau"];
    if (!tau.is_object()) throw ConfigError("tau", "must be an object");
    params.tau[c] = tau.contains(name) ? get_as<int>(tau[name], "tau." + name) : defaults.tau[c];
  }
  params.validate();

  auto& inputs = out.inputs;
  inputs.pub_dist = parse_pub_dist(require(config, "pub_dist", ""));
  inputs.ref_dist = parse_int_distribution(require(config, "ref_dist", ""), "ref_dist");

  const auto& ptd = config["peak_time_dist"];
  if (!ptd.is_object()) throw ConfigError("peak_time_dist", "must be an object");
  for (const auto& [key, value] : ptd.items()) {
    const std::string path = "peak_time_dist." + key;
    if (key == "PeakInit") {
      inputs.peak_times.peak_init = parse_int_distribution(value, path);
    } else if (key == "PeakLate") {
      inputs.peak_times.peak_late = parse_int_distribution(value, path);
    } else if (key == "PeakMul") {
      inputs.peak_times.peak_mul = parse_pair_distribution(value, path);
    } else if (key == "allow_defaults") {
      inputs.peak_times.allow_defaults = get_as<bool>(value, path);
    } else {
      throw ConfigError(path, "only PeakInit, PeakLate and PeakMul take peak times");
    }
  }

  const auto& boot = config["bootstrap"];
  if (!boot.is_object() || boot.size() != 1) {
    throw ConfigError("bootstrap", "must hold exactly one of synthetic, records, path");
  }
  std::vector<ingest::PaperRecord> records;
  if (boot.contains("synthetic")) {
    const auto& s = boot["synthetic"];
    if (!s.is_object()) throw ConfigError("bootstrap.synthetic", "must be an object");
    SyntheticBootstrap spec;
    if (s.contains("n")) spec.papers = get_as<std::size_t>(s["n"], "bootstrap.synthetic.n");
    if (s.contains("start_year")) spec.start_year = get_as<int>(s["start_year"], "bootstrap.synthetic.start_year");
    if (s.contains("years")) spec.years = get_as<int>(s["years"], "bootstrap.synthetic.years");
    spec.fractions = s.contains("fractions") ? parse_fractions(s["fractions"], "bootstrap.synthetic.fractions")
                                             : SyntheticBootstrap::empirical_fractions();
    spec.ref_dist = s.contains("ref_dist") ? parse_int_distribution(s["ref_dist"], "bootstrap.synthetic.ref_dist")
                                           : inputs.ref_dist;
    records = synthetic_bootstrap(spec, derive_seed(params.seed, kBootstrapStream));
  } else if (boot.contains("records")) {
    records = parse_inline_records(boot["records"]);
  } else if (boot.contains("path")) {
    std::filesystem::path p = get_as<std::string>(boot["path"], "bootstrap.path");
    if (p.is_relative()) p = base_dir / p;
    records = ingest::read_dataset(p).records;
    out.input_files.push_back(p);
  } else {
    throw ConfigError("bootstrap", "must hold exactly one of synthetic, records, path");
  }
  inputs.bootstrap = ingest::build_graph(std::move(records));
  inputs.validate();

  const auto& prof = config["profile"];
  if (!prof.is_object()) throw ConfigError("profile", "must be an object");
  auto& o = out.options;
  if (prof.contains("min_history")) o.profile_min_history = get_as<int>(prof["min_history"], "profile.min_history");
  if (prof.contains("max_window")) o.profile_max_window = get_as<int>(prof["max_window"], "profile.max_window");
  if (prof.contains("smoothing_window")) {
    o.profile_smoothing_window = get_as<int>(prof["smoothing_window"], "profile.smoothing_window");
  }
  if (prof.contains("min_papers")) o.profile_min_papers = get_as<std::size_t>(prof["min_papers"], "profile.min_papers");
  if (o.profile_min_history < 1 || o.profile_max_window < o.profile_min_history) {
    throw ConfigError("profile.max_window", "must be >= profile.min_history >= 1");
  }
  if (o.profile_smoothing_window < 1 || o.profile_smoothing_window % 2 == 0) {
    throw ConfigError("profile.smoothing_window", "must be odd and >= 1");
  }

  out.resolved = std::move(config);
  return out;
}

}  // namespace citeprof::growth
