#pragma once

// JSON configuration of a growth-model run.
//
//   {
//     "seed": 7, "replicas": 20,
//     "pub_dist": {"1976": 100, ...} | {"range": [1976, 2005], "count": 100},
//     "ref_dist": [[value, probability], ...] | {"3": 0.5, ...} | {"geometric_mean": 8},
//     "rho": {"MonDec": 0.25, "PeakInit": 0.7, "PeakLate": 0.5, "MonIncr": 0.3},
//     "tau": {"PeakInit": 1, "PeakMul": 3, "PeakLate": 3},
//     "peak_time_dist": {"PeakInit": [[4, 1.0]], "PeakMul": [[[5, 12], 1.0]]},
//     "bootstrap": {"synthetic": {"n": 600, "start_year": 1970, "years": 6,
//                                 "fractions": {"PeakInit": 0.252, ...}}}
//                | {"records": [{"id": ..., "year": ..., "category": ...}, ...]}
//                | {"path": "bootstrap.jsonl"},
//     "profile": {"min_history": 10, "max_window": 20, "smoothing_window": 1, "min_papers": 5}
//   }

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "citeprof/growth.hpp"

namespace citeprof::growth {

struct GrowthConfig {
  GrowthInputs inputs;
  GrowthParams params;
  SimulateOptions options;
  // Every key materialized, suitable for reproducing the run.
  nlohmann::json resolved;
  // Files read while resolving (bootstrap path).
  std::vector<std::filesystem::path> input_files;
};

/// Top-level keys that have defaults.
nlohmann::json default_growth_config();

/// Sets a dotted key (e.g. "rho.MonDec") to `value`, parsed as JSON when
/// possible and as a string otherwise. Throws ConfigError for a malformed
/// assignment or a path through a non-object.
void apply_override(nlohmann::json& config, std::string_view assignment);

/// Fills absent top-level keys from the defaults; present objects are used as
/// given. Relative bootstrap paths resolve against `base_dir`. Throws
/// ConfigError naming the offending key.
GrowthConfig resolve_growth_config(nlohmann::json config, const std::filesystem::path& base_dir,
                                   const std::vector<std::string>& overrides = {});

/// Reads a JSON file; throws IoError when it cannot be opened and ConfigError
/// when it is not a JSON object.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace citeprof::growth
