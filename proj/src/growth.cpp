#include "citeprof/growth.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "citeprof/error.hpp"
#include "citeprof/profile.hpp"
#include "citeprof/report.hpp"

namespace citeprof::growth {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over (seed, stream).
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::size_t sample_cumulative(std::span<const double> cumulative, Rng& rng) {
  const double u = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::min(n - 1, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n)));
}

}  // namespace

std::optional<std::size_t> weighted_index(std::span<const double> weights, Rng& rng) {
  std::vector<double> cumulative(weights.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] < 0.0) throw std::invalid_argument("negative selection weight");
    acc += weights[i];
    cumulative[i] = acc;
  }
  if (acc <= 0.0) return std::nullopt;
  return sample_cumulative(cumulative, rng);
}

template <typename T>
Categorical<T>::Categorical(std::vector<std::pair<T, double>> pmf) {
  double total = 0.0;
  for (const auto& [v, w] : pmf) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw std::invalid_argument("negative or non-finite weight");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("distribution has no mass");
  double acc = 0.0;
  for (auto& [v, w] : pmf) {
    values_.push_back(std::move(v));
    probs_.push_back(w / total);
    acc += w / total;
    cumulative_.push_back(acc);
  }
}

template <typename T>
const T& Categorical<T>::sample(Rng& rng) const {
  if (values_.empty()) throw InvalidStateError("sampling an empty distribution");
  return values_[sample_cumulative(cumulative_, rng)];
}

template class Categorical<int>;
template class Categorical<std::pair<int, int>>;

IntDistribution geometric_distribution(double mean, int cap) {
  if (!(mean > 0.0)) throw std::invalid_argument("geometric mean must be positive");
  const double p = 1.0 / (1.0 + mean);
  std::vector<std::pair<int, double>> pmf;
  double mass = p;
  for (int k = 0; k <= cap; ++k) {
    pmf.emplace_back(k, mass);
    mass *= 1.0 - p;
  }
  return IntDistribution(std::move(pmf));
}

double mean(const IntDistribution& d) {
  double m = 0.0;
  for (std::size_t i = 0; i < d.support().size(); ++i) m += d.support()[i] * d.probabilities()[i];
  return m;
}

void PeakTimeDistributions::validate() const {
  if (peak_init) {
    for (int t : peak_init->support()) {
      if (t < 2 || t > 5) throw ConfigError("peak_time_dist.PeakInit", "support must lie in [2, 5]");
    }
  }
  if (peak_late) {
    for (int t : peak_late->support()) {
      if (t < 6) throw ConfigError("peak_time_dist.PeakLate", "support must be >= 6");
    }
  }
  if (peak_mul) {
    for (const auto& [t1, t2] : peak_mul->support()) {
      if (t1 < 0 || t1 >= t2) throw ConfigError("peak_time_dist.PeakMul", "requires 0 <= T1 < T2");
    }
  }
  if (!allow_defaults) {
    if (!peak_init) throw ConfigError("peak_time_dist.PeakInit", "missing");
    if (!peak_late) throw ConfigError("peak_time_dist.PeakLate", "missing");
    if (!peak_mul) throw ConfigError("peak_time_dist.PeakMul", "missing");
  }
}

PeakTimes sample_peak_times(Category c, const PeakTimeDistributions& dists, Rng& rng) {
  auto missing = [&](const char* path) {
    if (!dists.allow_defaults) throw ConfigError(path, "missing peak-time distribution");
  };
  switch (c) {
    case Category::PeakInit:
      if (dists.peak_init) return SinglePeak{dists.peak_init->sample(rng)};
      missing("peak_time_dist.PeakInit");
      return SinglePeak{kDefaultPeakInitT};
    case Category::PeakLate:
      if (dists.peak_late) return SinglePeak{dists.peak_late->sample(rng)};
      missing("peak_time_dist.PeakLate");
      return SinglePeak{kDefaultPeakLateT};
    case Category::PeakMul:
      if (dists.peak_mul) {
        const auto& [t1, t2] = dists.peak_mul->sample(rng);
        return DoublePeak{t1, t2};
      }
      missing("peak_time_dist.PeakMul");
      return kDefaultPeakMulT;
    default:
      return NoPeak{};
  }
}

GrowthParams GrowthParams::defaults() {
  GrowthParams p;
  p.rho[Category::MonDec] = 0.25;
  p.rho[Category::PeakInit] = 0.7;
  p.rho[Category::PeakLate] = 0.5;
  p.rho[Category::MonIncr] = 0.3;
  for (auto c : kAllCategories) p.tau[c] = 3;
  p.tau[Category::PeakInit] = 1;
  return p;
}

void GrowthParams::validate() const {
  for (auto c : {Category::MonDec, Category::PeakInit, Category::PeakLate, Category::MonIncr}) {
    if (!(rho[c] > 0.0) || !std::isfinite(rho[c])) {
      throw ConfigError("rho." + std::string(to_string(c)), "must be positive");
    }
  }
  for (auto c : kAllCategories) {
    if (tau[c] < 0) throw ConfigError("tau." + std::string(to_string(c)), "must be >= 0");
  }
  if (replicas < 1) throw ConfigError("replicas", "must be >= 1");
}

double CategoryState::mu() const {
  return members == 0 ? 0.0 : static_cast<double>(citations) / static_cast<double>(members);
}

double attractiveness(Category c, int k, double mu, int t, const PeakTimes& peaks,
                      const GrowthParams& params) {
  if (t < 0) throw std::invalid_argument("elapsed time must be non-negative");
  const double base = static_cast<double>(k) + mu;
  const double td = static_cast<double>(t);
  const double rho = params.rho[c];
  const int tau = params.tau[c];

  switch (c) {
    case Category::MonDec:
      return base / std::exp(rho * td);
    case Category::PeakInit:
    case Category::PeakLate: {
      const auto* p = std::get_if<SinglePeak>(&peaks);
      if (!p) throw std::invalid_argument("single-peak category needs one peak time");
      return t <= p->t + tau ? base : base / (rho * td);
    }
    case Category::PeakMul: {
      const auto* p = std::get_if<DoublePeak>(&peaks);
      if (!p) throw std::invalid_argument("PeakMul needs two peak times");
      const double first_end = p->t1 + tau;
      const double valley_end = 0.5 * (p->t1 + p->t2) + tau;
      const double second_end = p->t2 + tau;
      if (td <= first_end) return base;
      if (td <= valley_end) return base / td;
      if (td <= second_end) return base;
      return base / td;
    }
    case Category::MonIncr:
      return static_cast<double>(k) + rho * mu + td;
    case Category::Oth:
      return 1.0;
  }
  return 0.0;
}

double attractiveness(const NodeState& node, int t_elapsed, const CategoryState& cat,
                      const GrowthParams& params) {
  return attractiveness(node.category, node.in_degree, cat.mu(), t_elapsed, node.peaks, params);
}

Category select_category_for_new_paper(std::span<const CategoryState> states, Rng& rng) {
  std::vector<double> w;
  w.reserve(states.size());
  for (const auto& s : states) w.push_back(static_cast<double>(s.members));
  auto i = weighted_index(w, rng);
  if (!i) throw InvalidStateError("all category buckets are empty");
  return states[*i].category;
}

Category select_target_bucket(std::span<const CategoryState> states, Rng& rng) {
  std::vector<double> w;
  w.reserve(states.size());
  for (const auto& s : states) w.push_back(static_cast<double>(s.citations));
  if (auto i = weighted_index(w, rng)) return states[*i].category;
  for (std::size_t i = 0; i < states.size(); ++i) w[i] = states[i].members > 0 ? 1.0 : 0.0;
  auto i = weighted_index(w, rng);
  if (!i) throw InvalidStateError("all category buckets are empty");
  return states[*i].category;
}

BucketSampler::BucketSampler(std::span<const NodeState> members, int year, const CategoryState& cat,
                             const GrowthParams& params) {
  ids_.reserve(members.size());
  weights_.reserve(members.size());
  cumulative_.reserve(members.size());
  double acc = 0.0;
  for (const auto& m : members) {
    const double pi = attractiveness(m, year - m.birth_year, cat, params);
    ids_.push_back(m.id);
    weights_.push_back(pi);
    acc += pi;
    cumulative_.push_back(acc);
  }
}

ingest::NodeId BucketSampler::sample(Rng& rng) const {
  if (ids_.empty()) throw InvalidStateError("selecting from an empty bucket");
  if (!(cumulative_.back() > 0.0)) return ids_[uniform_index(ids_.size(), rng)];
  return ids_[sample_cumulative(cumulative_, rng)];
}

ingest::NodeId select_target_paper(std::span<const NodeState> members, int year,
                                   const CategoryState& cat, const GrowthParams& params, Rng& rng) {
  return BucketSampler(members, year, cat, params).sample(rng);
}

void GrowthInputs::validate() const {
  for (const auto& [year, n] : pub_dist) {
    if (n < 0) throw ConfigError("pub_dist." + std::to_string(year), "must be >= 0");
  }
  if (ref_dist.empty()) throw ConfigError("ref_dist", "missing");
  for (int r : ref_dist.support()) {
    if (r < 0) throw ConfigError("ref_dist", "reference counts must be >= 0");
  }
  peak_times.validate();
  if (bootstrap.node_count() == 0) throw ConfigError("bootstrap", "empty bootstrap network");
  for (const auto& r : bootstrap.records()) {
    if (!r.category) throw ConfigError("bootstrap", "record " + r.id + " has no category");
  }
}

PerCategory<double> SyntheticBootstrap::empirical_fractions() {
  PerCategory<double> f;
  f[Category::PeakInit] = 0.252;
  f[Category::PeakMul] = 0.235;
  f[Category::PeakLate] = 0.037;
  f[Category::MonDec] = 0.016;
  f[Category::MonIncr] = 0.012;
  f[Category::Oth] = 0.448;
  return f;
}

namespace {

std::string padded(char prefix, std::size_t n) {
  std::string digits = std::to_string(n);
  if (digits.size() < 7) digits.insert(0, 7 - digits.size(), '0');
  return prefix + digits;
}

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(i, rng)]);
}

}  // namespace

std::vector<ingest::PaperRecord> synthetic_bootstrap(const SyntheticBootstrap& spec, std::uint64_t seed) {
  if (spec.papers == 0) throw ConfigError("bootstrap.synthetic.n", "must be positive");
  if (spec.years < 1) throw ConfigError("bootstrap.synthetic.years", "must be positive");
  if (spec.ref_dist.empty()) throw ConfigError("bootstrap.synthetic.ref_dist", "missing");
  double total = 0.0;
  for (double f : spec.fractions.values) {
    if (!(f >= 0.0)) throw ConfigError("bootstrap.synthetic.fractions", "must be >= 0");
    total += f;
  }
  if (!(total > 0.0)) throw ConfigError("bootstrap.synthetic.fractions", "no mass");

  // Largest-remainder quotas.
  PerCategory<std::size_t> quota;
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < kNumCategories; ++i) {
    const double exact = spec.fractions.values[i] / total * static_cast<double>(spec.papers);
    quota.values[i] = static_cast<std::size_t>(std::floor(exact));
    assigned += quota.values[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < spec.papers; ++i, ++assigned) ++quota.values[remainders[i].second];

  Rng rng(seed);
  std::vector<Category> labels;
  labels.reserve(spec.papers);
  for (auto c : kAllCategories) labels.insert(labels.end(), quota[c], c);
  shuffle(labels, rng);

  std::vector<ingest::PaperRecord> out(spec.papers);
  for (std::size_t i = 0; i < spec.papers; ++i) {
    out[i].id = padded('b', i);
    out[i].year = spec.start_year +
                  static_cast<int>(i * static_cast<std::size_t>(spec.years) / spec.papers);
    out[i].category = labels[i];
  }
  std::size_t earlier = 0;  // papers of strictly earlier years
  for (std::size_t i = 0; i < spec.papers; ++i) {
    if (i > 0 && out[i].year != out[i - 1].year) earlier = i;
    if (earlier == 0) continue;
    const auto want = std::min<std::size_t>(static_cast<std::size_t>(spec.ref_dist.sample(rng)), earlier);
    std::vector<std::size_t> picks;
    while (picks.size() < want) {
      const auto j = uniform_index(earlier, rng);
      if (std::find(picks.begin(), picks.end(), j) == picks.end()) picks.push_back(j);
    }
    std::sort(picks.begin(), picks.end());
    for (auto j : picks) out[i].references.push_back(out[j].id);
  }
  return out;
}

SimulationState::SimulationState(const ingest::CitationGraph& bootstrap,
                                 const PeakTimeDistributions& peaks, Rng& rng) {
  const auto n = bootstrap.node_count();
  nodes_.reserve(n);
  for (ingest::NodeId i = 0; i < n; ++i) {
    const auto& rec = bootstrap.record(i);
    if (!rec.category) throw ConfigError("bootstrap", "record " + rec.id + " has no category");
    NodeState s;
    s.id = i;
    s.birth_year = rec.year;
    s.category = *rec.category;
    s.in_degree = static_cast<int>(bootstrap.in_degree(i));
    s.peaks = sample_peak_times(s.category, peaks, rng);
    nodes_.push_back(s);
    ids_.push_back(rec.id);
    refs_.emplace_back(bootstrap.references(i).begin(), bootstrap.references(i).end());
    members_[s.category].push_back(i);
  }
  last_year_ = bootstrap.last_year().value_or(0);
  bootstrap_end_ = last_year_;
}

std::vector<NodeState> SimulationState::bucket(Category c) const {
  std::vector<NodeState> out;
  out.reserve(members_[c].size());
  for (auto id : members_[c]) out.push_back(nodes_[id]);
  return out;
}

std::vector<CategoryState> SimulationState::category_states() const {
  std::vector<CategoryState> out;
  for (auto c : kAllCategories) {
    CategoryState s{c, members_[c].size(), 0};
    for (auto id : members_[c]) s.citations += nodes_[id].in_degree;
    out.push_back(s);
  }
  return out;
}

std::size_t SimulationState::edge_count() const {
  std::size_t e = 0;
  for (const auto& r : refs_) e += r.size();
  return e;
}

std::vector<ingest::PaperRecord> SimulationState::to_records() const {
  std::vector<ingest::PaperRecord> out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    out[i].id = ids_[i];
    out[i].year = nodes_[i].birth_year;
    out[i].category = nodes_[i].category;
    for (auto v : refs_[i]) out[i].references.push_back(ids_[v]);
  }
  return out;
}

bool simulate_step(SimulationState& state, int t, const GrowthInputs& inputs,
                   const GrowthParams& params, Rng& rng) {
  if (t <= state.last_year_) throw std::invalid_argument("simulation years must increase");
  state.last_year_ = t;
  auto it = inputs.pub_dist.find(t);
  if (it == inputs.pub_dist.end()) return false;
  const int n_new = it->second;
  if (n_new <= 0) return true;

  // Everything below reads the end-of-(t-1) snapshot.
  const auto cats = state.category_states();
  PerCategory<BucketSampler> samplers;
  for (const auto& cs : cats) {
    const auto members = state.bucket(cs.category);
    samplers[cs.category] = BucketSampler(members, t, cs, params);
  }

  struct Pending {
    Category category;
    PeakTimes peaks;
    std::vector<ingest::NodeId> refs;
  };
  std::vector<Pending> born;
  born.reserve(static_cast<std::size_t>(n_new));
  for (int i = 0; i < n_new; ++i) {
    Pending p;
    p.category = select_category_for_new_paper(cats, rng);
    const int r = inputs.ref_dist.sample(rng);
    state.sampled_refs_.push_back(r);
    p.peaks = sample_peak_times(p.category, inputs.peak_times, rng);
    const auto want = static_cast<std::size_t>(r);
    const std::size_t max_attempts = 50 * want;
    for (std::size_t attempt = 0; p.refs.size() < want && attempt < max_attempts; ++attempt) {
      const auto target = samplers[select_target_bucket(cats, rng)].sample(rng);
      if (std::find(p.refs.begin(), p.refs.end(), target) == p.refs.end()) p.refs.push_back(target);
    }
    if (p.refs.size() < want) ++state.truncated_;
    std::sort(p.refs.begin(), p.refs.end());
    born.push_back(std::move(p));
  }

  for (auto& p : born) {
    const auto id = static_cast<ingest::NodeId>(state.nodes_.size());
    for (auto v : p.refs) ++state.nodes_[v].in_degree;
    state.nodes_.push_back({id, t, p.category, 0, p.peaks});
    state.ids_.push_back(padded('g', id));
    state.refs_.push_back(std::move(p.refs));
    state.members_[p.category].push_back(id);
  }
  return true;
}

Replica run_replica(const GrowthInputs& inputs, const GrowthParams& params, std::uint64_t seed) {
  Rng rng(seed);
  SimulationState state(inputs.bootstrap, inputs.peak_times, rng);
  Replica out;
  out.seed = seed;
  out.first_simulated_year = state.bootstrap_end() + 1;
  for (const auto& [year, n] : inputs.pub_dist) {
    if (year <= state.last_year()) continue;
    // Years missing from pub_dist between listed years insert nothing.
    for (int y = state.last_year() + 1; y <= year; ++y) simulate_step(state, y, inputs, params, rng);
  }
  out.last_year = state.last_year();
  out.sampled_reference_counts.assign(state.sampled_reference_counts().begin(),
                                      state.sampled_reference_counts().end());
  out.truncated_reference_lists = state.truncated_reference_lists();
  out.graph = ingest::build_graph(state.to_records());
  return out;
}

PerCategory<std::vector<std::vector<double>>> profile_series(const Replica& replica,
                                                             const SimulateOptions& opts) {
  const auto& g = replica.graph;
  PerCategory<std::vector<std::vector<double>>> series;
  for (ingest::NodeId n = 0; n < g.node_count(); ++n) {
    const auto& rec = g.record(n);
    if (rec.year < replica.first_simulated_year || !rec.category) continue;
    if (replica.last_year - rec.year + 1 < opts.profile_min_history) continue;
    const auto s = ingest::observed_series(g, n, replica.last_year, opts.profile_max_window);
    series[*rec.category].push_back(
        profile::normalize(profile::smooth(s, opts.profile_smoothing_window)).values);
  }
  return series;
}

PerCategory<CategoryProfile> replica_profiles(const Replica& replica, const SimulateOptions& opts) {
  const auto series = profile_series(replica, opts);
  PerCategory<CategoryProfile> out;
  report::BeltOptions belt_opts;
  belt_opts.min_papers_per_age = std::max<std::size_t>(opts.profile_min_papers, 1);
  for (auto c : kAllCategories) {
    const auto belt = report::citation_belt(series[c], belt_opts);
    out[c].papers = series[c].size();
    for (const auto& p : belt.ages) out[c].ages.push_back({p.mean, p.q1, p.q3});
  }
  return out;
}

PerCategory<CategoryProfile> average_profiles(std::span<const PerCategory<CategoryProfile>> per_replica) {
  PerCategory<CategoryProfile> out;
  for (auto c : kAllCategories) {
    std::size_t ages = 0;
    for (const auto& r : per_replica) {
      ages = std::max(ages, r[c].ages.size());
      out[c].papers += r[c].papers;
    }
    std::vector<double> col;
    // Sorting first makes the sum independent of replica order.
    auto sorted_mean = [&col, per_replica, c](std::size_t age, double ProfilePoint::*field) {
      col.clear();
      for (const auto& r : per_replica) {
        if (age < r[c].ages.size()) col.push_back(r[c].ages[age].*field);
      }
      std::sort(col.begin(), col.end());
      return std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
    };
    for (std::size_t a = 0; a < ages; ++a) {
      out[c].ages.push_back({sorted_mean(a, &ProfilePoint::mean), sorted_mean(a, &ProfilePoint::q1),
                             sorted_mean(a, &ProfilePoint::q3)});
    }
  }
  return out;
}

SimulationResult simulate(const GrowthInputs& inputs, const GrowthParams& params,
                          const SimulateOptions& opts) {
  inputs.validate();
  params.validate();
  const auto n = static_cast<std::size_t>(params.replicas);
  SimulationResult out;
  out.replicas.resize(n);
  std::vector<PerCategory<CategoryProfile>> profiles(n);

  auto work = [&](std::size_t i) {
    out.replicas[i] = run_replica(inputs, params, derive_seed(params.seed, i));
    profiles[i] = replica_profiles(out.replicas[i], opts);
  };
  const std::size_t threads = std::clamp<std::size_t>(opts.threads, 1, n);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) work(i);
      });
    }
  }
  out.profiles = average_profiles(profiles);
  return out;
}

}  // namespace citeprof::growth
