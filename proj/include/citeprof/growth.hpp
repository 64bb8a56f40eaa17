#pragma once

// Category-aware citation-network growth: papers join one of six buckets,
// draw a reference count, and cite existing papers chosen first by bucket
// (proportional to the bucket's citations) and then by per-category
// attractiveness mixing preferential attachment with aging.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "citeprof/category.hpp"
#include "citeprof/ingest.hpp"

namespace citeprof::growth {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Seed of the independent stream `stream` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Index drawn with probability weights[i] / sum(weights). Returns nullopt
/// when every weight is zero.
std::optional<std::size_t> weighted_index(std::span<const double> weights, Rng& rng);

/// Finite distribution over values of type T.
template <typename T>
class Categorical {
 public:
  Categorical() = default;

  /// Weights must be non-negative with a positive sum; they are normalized.
  /// Throws std::invalid_argument otherwise.
  explicit Categorical(std::vector<std::pair<T, double>> pmf);

  static Categorical point(T value) { return Categorical({{std::move(value), 1.0}}); }

  const T& sample(Rng& rng) const;

  bool empty() const { return values_.empty(); }
  std::span<const T> support() const { return values_; }
  std::span<const double> probabilities() const { return probs_; }

 private:
  std::vector<T> values_;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

using IntDistribution = Categorical<int>;

/// Geometric PMF on {0, 1, 2, ...} with the given mean, truncated at `cap`
/// and renormalized.
IntDistribution geometric_distribution(double mean, int cap = 400);

double mean(const IntDistribution& d);

struct NoPeak {
  bool operator==(const NoPeak&) const = default;
};
struct SinglePeak {
  int t = 0;
  bool operator==(const SinglePeak&) const = default;
};
struct DoublePeak {
  int t1 = 0;
  int t2 = 0;
  bool operator==(const DoublePeak&) const = default;
};
using PeakTimes = std::variant<NoPeak, SinglePeak, DoublePeak>;

struct PeakTimeDistributions {
  std::optional<IntDistribution> peak_init;
  std::optional<IntDistribution> peak_late;
  std::optional<Categorical<std::pair<int, int>>> peak_mul;
  // When false, a missing distribution is a configuration error instead of
  // falling back to the built-in defaults.
  bool allow_defaults = true;

  /// Throws ConfigError when a distribution has support outside its
  /// category's range (PeakInit [2,5], PeakLate >= 6, PeakMul t1 < t2).
  void validate() const;
};

inline constexpr int kDefaultPeakInitT = 4;
inline constexpr int kDefaultPeakLateT = 11;
inline constexpr DoublePeak kDefaultPeakMulT{5, 12};

/// Peak times for a paper born into `c`.
PeakTimes sample_peak_times(Category c, const PeakTimeDistributions& dists, Rng& rng);

struct GrowthParams {
  PerCategory<double> rho;
  PerCategory<int> tau;
  int replicas = 100;
  std::uint64_t seed = 0;

  /// rho: MonDec 0.25, PeakInit 0.7, PeakLate 0.5, MonIncr 0.3;
  /// tau: PeakInit 1, all others 3.
  static GrowthParams defaults();
  void validate() const;
};

struct NodeState {
  ingest::NodeId id = 0;
  int birth_year = 0;
  Category category = Category::Oth;
  int in_degree = 0;
  PeakTimes peaks;
};

struct CategoryState {
  Category category = Category::Oth;
  std::size_t members = 0;
  long citations = 0;

  /// Mean in-degree of the members (0 for an empty bucket).
  double mu() const;
};

/// Attractiveness of a paper `t_elapsed` years after publication.
/// Throws std::invalid_argument for negative t or peak times that do not
/// match the category.
double attractiveness(Category c, int k, double mu, int t_elapsed, const PeakTimes& peaks,
                      const GrowthParams& params);
double attractiveness(const NodeState& node, int t_elapsed, const CategoryState& cat,
                      const GrowthParams& params);

/// Bucket for an incoming paper, proportional to bucket size. Throws
/// InvalidStateError when all buckets are empty.
Category select_category_for_new_paper(std::span<const CategoryState> states, Rng& rng);

/// Bucket for one reference, proportional to the bucket's citations; uniform
/// over non-empty buckets when no bucket has citations yet.
Category select_target_bucket(std::span<const CategoryState> states, Rng& rng);

/// Precomputed attractiveness weights of one bucket for one simulation year.
class BucketSampler {
 public:
  BucketSampler() = default;
  BucketSampler(std::span<const NodeState> members, int year, const CategoryState& cat,
                const GrowthParams& params);

  bool empty() const { return ids_.empty(); }
  std::span<const double> weights() const { return weights_; }
  /// Member drawn with probability proportional to its attractiveness,
  /// uniformly when all attractiveness values are zero.
  ingest::NodeId sample(Rng& rng) const;

 private:
  std::vector<ingest::NodeId> ids_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

/// One draw from a bucket. Attractiveness uses the age in `year` and the
/// in-degrees and mu of the previous year's snapshot. Throws
/// InvalidStateError for an empty bucket.
ingest::NodeId select_target_paper(std::span<const NodeState> members, int year,
                                   const CategoryState& cat, const GrowthParams& params, Rng& rng);

struct GrowthInputs {
  std::map<int, int> pub_dist;
  IntDistribution ref_dist;
  PeakTimeDistributions peak_times;
  // Labeled seed network; every record carries a category.
  ingest::CitationGraph bootstrap;

  /// Throws ConfigError.
  void validate() const;
};

struct SyntheticBootstrap {
  std::size_t papers = 600;
  int start_year = 1970;
  int years = 6;
  PerCategory<double> fractions;
  // Reference counts of bootstrap papers (citing uniformly among papers of
  // strictly earlier years).
  IntDistribution ref_dist;

  /// The category proportions reported for the full corpus:
  /// 25.2/23.5/3.7/1.6/1.2/44.8 percent.
  static PerCategory<double> empirical_fractions();
};

/// Random labeled DAG. Category counts follow `fractions` by largest
/// remainder; assignment and citations are random.
std::vector<ingest::PaperRecord> synthetic_bootstrap(const SyntheticBootstrap& spec, std::uint64_t seed);

class SimulationState {
 public:
  /// Seeds buckets from a labeled graph; peak times of bootstrap papers are
  /// drawn from `rng`. Throws ConfigError for unlabeled records.
  SimulationState(const ingest::CitationGraph& bootstrap, const PeakTimeDistributions& peaks, Rng& rng);

  std::span<const NodeState> nodes() const { return nodes_; }
  std::span<const ingest::NodeId> references(ingest::NodeId n) const { return refs_[n]; }
  /// Snapshot of the members of one bucket.
  std::vector<NodeState> bucket(Category c) const;
  std::vector<CategoryState> category_states() const;
  std::size_t edge_count() const;
  const std::string& paper_id(ingest::NodeId n) const { return ids_[n]; }
  int last_year() const { return last_year_; }
  int bootstrap_end() const { return bootstrap_end_; }

  /// Reference counts drawn for papers inserted so far (in insertion order).
  std::span<const int> sampled_reference_counts() const { return sampled_refs_; }
  /// Papers that received fewer distinct references than drawn.
  std::size_t truncated_reference_lists() const { return truncated_; }

  /// Records of all papers, generation label in `category`.
  std::vector<ingest::PaperRecord> to_records() const;

 private:
  friend bool simulate_step(SimulationState&, int, const GrowthInputs&, const GrowthParams&, Rng&);

  std::vector<NodeState> nodes_;
  std::vector<std::string> ids_;
  std::vector<std::vector<ingest::NodeId>> refs_;
  PerCategory<std::vector<ingest::NodeId>> members_;
  std::vector<int> sampled_refs_;
  std::size_t truncated_ = 0;
  int last_year_ = 0;
  int bootstrap_end_ = 0;
};

/// Inserts the papers of year `t`. All selections in the year use the state
/// at the end of t-1; new papers join their buckets after the whole year is
/// drawn. Returns false (no insertions) when `t` is absent from pub_dist.
/// Throws std::invalid_argument when t is not after the last simulated year.
bool simulate_step(SimulationState& state, int t, const GrowthInputs& inputs,
                   const GrowthParams& params, Rng& rng);

struct ProfilePoint {
  double mean = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;

  bool operator==(const ProfilePoint&) const = default;
};

struct CategoryProfile {
  std::vector<ProfilePoint> ages;
  std::size_t papers = 0;  // summed over replicas

  bool operator==(const CategoryProfile&) const = default;
};

struct Replica {
  std::uint64_t seed = 0;
  ingest::CitationGraph graph;  // records carry generation labels
  int first_simulated_year = 0;
  int last_year = 0;
  std::vector<int> sampled_reference_counts;
  std::size_t truncated_reference_lists = 0;
};

struct SimulateOptions {
  unsigned threads = 1;
  // Papers need this many observed years to enter the profiles.
  int profile_min_history = 10;
  int profile_max_window = 20;
  // Moving-average width applied to each paper before normalization.
  int profile_smoothing_window = 1;
  // Ages with fewer papers than this are dropped from a replica's profile.
  std::size_t profile_min_papers = 5;
};

struct SimulationResult {
  std::vector<Replica> replicas;
  PerCategory<CategoryProfile> profiles;
};

/// One replica, sequential over the years of pub_dist after the bootstrap.
Replica run_replica(const GrowthInputs& inputs, const GrowthParams& params, std::uint64_t seed);

/// Normalized per-paper series of the simulated (non-bootstrap) papers with
/// enough history, grouped by generation label.
PerCategory<std::vector<std::vector<double>>> profile_series(const Replica& replica,
                                                             const SimulateOptions& opts);

/// Normalized per-paper profiles of the simulated (non-bootstrap) papers
/// grouped by generation label, reduced to per-age 10th percentile, mean and
/// 90th percentile.
PerCategory<CategoryProfile> replica_profiles(const Replica& replica, const SimulateOptions& opts);

/// Per-age average of per-replica profiles over the replicas that observed
/// that age; independent of replica order.
PerCategory<CategoryProfile> average_profiles(std::span<const PerCategory<CategoryProfile>> per_replica);

/// `params.replicas` independent runs seeded with derive_seed(params.seed, i).
SimulationResult simulate(const GrowthInputs& inputs, const GrowthParams& params,
                          const SimulateOptions& opts = {});

}  // namespace citeprof::growth
