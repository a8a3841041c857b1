// Copyright 2026 The setvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Seeded Monte Carlo scenarios exercising the coverage and size contracts of
// the merge rules at desk scale. Replications are embarrassingly parallel:
// replication i draws from its own generator seeded by (master_seed, i), all
// per-replication values are stored by index, and aggregation is a pairwise
// sum in index order — so reports are bit-identical for any thread count.

#ifndef SETVOTE_SIMULATE_HPP
#define SETVOTE_SIMULATE_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "setvote/derandomize.hpp"
#include "setvote/merge.hpp"
#include "setvote/numeric.hpp"
#include "setvote/pvalue.hpp"
#include "setvote/random.hpp"
#include "setvote/risk.hpp"
#include "setvote/sequential.hpp"

namespace setvote {

struct ExperimentConfig {
  std::string scenario;
  long replications = 1000;
  std::uint64_t master_seed = 0;
  std::string variant = "I";  // private-agents: data scenario I or II
  int agents = 10;            // K: sets, splits or estimator replicates
  int sample_size = 100;      // n
  double alpha = 0.1;
  double epsilon = 2.0;       // local privacy parameter
  double tau = 0.5;           // vote threshold
  double share = 0.5;         // fraction of observations copied from the previous agent
  int mom_buckets = 21;       // B for median-of-means (B_1 when nested in hull buckets)
  int dimension = 5;          // regression dimension for multisplit-conformal
  int lambda_draws = 20;      // N sampled parameter values
  int threads = 0;            // 0 = hardware concurrency
};

inline const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {
      "private-agents", "worst-case",      "multisplit-conformal", "momom",
      "hulc-mom",       "lambda-sampling", "ruger-validity",       "risk-control"};
  return names;
}

inline ExperimentConfig default_config(const std::string& scenario) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  if (scenario == "private-agents") {
    cfg.replications = 10000;
    cfg.agents = 10;
    cfg.sample_size = 100;
    cfg.alpha = 0.1;
    cfg.epsilon = 2.0;
  } else if (scenario == "worst-case") {
    cfg.replications = 100000;
    cfg.agents = 5;
    cfg.alpha = 0.1;
  } else if (scenario == "multisplit-conformal") {
    cfg.replications = 1000;
    cfg.agents = 20;
    cfg.sample_size = 100;
    cfg.dimension = 5;
    cfg.alpha = 0.1;
    cfg.tau = 0.5;
  } else if (scenario == "momom") {
    cfg.replications = 1000;
    cfg.agents = 70;
    cfg.sample_size = 210;
    cfg.mom_buckets = 21;
  } else if (scenario == "hulc-mom") {
    cfg.replications = 1000;
    cfg.agents = 20;
    cfg.sample_size = 210;
    cfg.mom_buckets = 7;
    cfg.alpha = 0.05;
  } else if (scenario == "lambda-sampling") {
    cfg.replications = 10000;
    cfg.lambda_draws = 20;
    cfg.sample_size = 100;
    cfg.alpha = 0.1;
  } else if (scenario == "ruger-validity") {
    cfg.replications = 100000;
    cfg.agents = 5;
  } else if (scenario == "risk-control") {
    cfg.replications = 10000;
    cfg.agents = 5;
    cfg.alpha = 0.1;
  } else {
    throw std::invalid_argument("unknown scenario: " + scenario);
  }
  return cfg;
}

struct ReportRow {
  std::string name;
  double coverage = 0.0;  // for p-value rows: rejection rate; for risk rows: empirical risk
  double avg_width = 0.0;
  double frac_empty = 0.0;
  double frac_multipart = 0.0;
  double mc_se = 0.0;  // Monte Carlo standard error of the coverage column
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<std::pair<std::string, std::vector<double>>> curves;

  const ReportRow& row(const std::string& name) const {
    for (const ReportRow& r : rows)
      if (r.name == name) return r;
    throw std::invalid_argument("ExperimentReport: no row named " + name);
  }
  double extra(const std::string& name) const {
    for (const auto& [key, value] : extras)
      if (key == name) return value;
    throw std::invalid_argument("ExperimentReport: no extra named " + name);
  }
  const std::vector<double>& curve(const std::string& name) const {
    for (const auto& [key, values] : curves)
      if (key == name) return values;
    throw std::invalid_argument("ExperimentReport: no curve named " + name);
  }
};

namespace detail {

inline void run_replications(long reps, int threads, const std::function<void(long)>& body) {
  long workers = threads > 0 ? threads : long(std::thread::hardware_concurrency());
  workers = std::max(1L, std::min(workers, reps));
  if (workers == 1) {
    for (long i = 0; i < reps; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (long w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < reps; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : pairwise_sum(v) / double(v.size());
}

// Standard error of the mean from the sample variance; sums of squares are
// pairwise in index order, so the value is reproducible.
inline double sample_se(std::span<const double> v) {
  std::size_t n = v.size();
  if (n < 2) return 0.0;
  double mean = mean_of(v);
  std::vector<double> sq(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (v[i] - mean) * (v[i] - mean);
  double var = pairwise_sum(sq) / double(n - 1);
  return std::sqrt(std::max(0.0, var / double(n)));
}

// Per-replication tallies for one merge rule, reduced to a report row.
struct RuleTally {
  std::vector<double> covered, width, empty, multi;

  explicit RuleTally(long reps)
      : covered(std::size_t(reps), 0.0),
        width(std::size_t(reps), 0.0),
        empty(std::size_t(reps), 0.0),
        multi(std::size_t(reps), 0.0) {}

  void record(long rep, const IntervalUnion& set, double target) {
    std::size_t i = std::size_t(rep);
    covered[i] = set.contains(target) ? 1.0 : 0.0;
    width[i] = set.measure();
    empty[i] = set.empty() ? 1.0 : 0.0;
    multi[i] = set.part_count() > 1 ? 1.0 : 0.0;
  }

  ReportRow row(std::string name) const {
    ReportRow r;
    r.name = std::move(name);
    r.coverage = mean_of(covered);
    r.avg_width = mean_of(width);
    r.frac_empty = mean_of(empty);
    r.frac_multipart = mean_of(multi);
    r.mc_se = std::sqrt(std::max(0.0, r.coverage * (1.0 - r.coverage) / double(covered.size())));
    return r;
  }
};

// Scenario self-check: empirical coverage may not undershoot its analytic
// floor by more than three Monte Carlo standard errors. Violations are
// counted into the report's extras.
inline void check_coverage_floor(const ReportRow& row, double analytic_lower, long& violations) {
  if (row.coverage < analytic_lower - 3.0 * row.mc_se) ++violations;
}

// Gaussian elimination with partial pivoting; a is square, consumed in place.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("solve_linear: singular system");
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Locally private mean intervals.

inline double privacy_contraction(double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("privacy parameter must be positive");
  return (std::exp(epsilon) - 1.0) / (std::exp(epsilon) + 1.0);
}

inline double private_hoeffding_half_width(int n, double epsilon, double alpha) {
  if (n < 1) throw std::invalid_argument("private_hoeffding: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("private_hoeffding: alpha must lie in (0,1)");
  double r = privacy_contraction(epsilon);
  return std::sqrt(-std::log(alpha / 2.0) / (2.0 * double(n) * r * r));
}

// Confidence interval for the mean of [0,1]-valued data observed only through
// epsilon-locally-private bits: debias the bit sum, then apply the Hoeffding
// width, which depends only on (n, alpha, epsilon).
inline Interval private_hoeffding_interval(std::span<const int> private_bits, double epsilon,
                                           double alpha) {
  int n = int(private_bits.size());
  double half = private_hoeffding_half_width(n, epsilon, alpha);
  double r = privacy_contraction(epsilon);
  double sum = 0.0;
  for (int z : private_bits) {
    if (z != 0 && z != 1) throw std::invalid_argument("private_hoeffding: bits must be 0/1");
    sum += double(z);
  }
  double estimate = (sum - double(n) * (1.0 - r) / 2.0) / (double(n) * r);
  return Interval(estimate - half, estimate + half, true, true);
}

// Binary randomized response after stochastic rounding to {0,1}: emits a bit
// with mean (1-r)/2 + r*x, the unique affine map that makes the debiased
// estimator above unbiased for the mean of the raw values.
inline std::vector<int> randomized_response(std::span<const double> raw, double epsilon,
                                            Rng& rng) {
  double r = privacy_contraction(epsilon);
  std::vector<int> bits;
  bits.reserve(raw.size());
  for (double x : raw) {
    if (!(x >= 0.0 && x <= 1.0))
      throw std::invalid_argument("randomized_response: values must lie in [0,1]");
    double p_one = (1.0 - r) / 2.0 + r * x;
    bits.push_back(rng.bernoulli(p_one) ? 1 : 0);
  }
  return bits;
}

inline std::vector<int> randomized_response(std::span<const double> raw, double epsilon,
                                            std::uint64_t seed) {
  Rng rng(seed);
  return randomized_response(raw, epsilon, rng);
}

// K agents publish locally private Hoeffding intervals for a shared mean of
// 0.5; their raw data overlap (variant I: a common pool; variant II: each
// agent copies a fraction of the previous agent's observations), so the
// intervals are dependent. Merged by majority, randomized, randomized-union
// and permuted voting.
inline ExperimentReport run_private_agents(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.agents < 1) throw std::invalid_argument("agents must be >= 1");
  if (cfg.variant != "I" && cfg.variant != "II")
    throw std::invalid_argument("private-agents: variant must be I or II");
  if (cfg.variant == "II" && !(cfg.share >= 0.0 && cfg.share <= 1.0))
    throw std::invalid_argument("private-agents: share must lie in [0,1]");
  const long reps = cfg.replications;
  const int k_agents = cfg.agents;
  const int n = cfg.sample_size;
  const double target = 0.5;

  detail::RuleTally agent_tally(reps), majority(reps), randomized(reps), rand_union(reps),
      permuted(reps);
  std::vector<double> agent_cover(std::size_t(reps), 0.0);

  const std::size_t agent_count = std::size_t(k_agents);
  const std::size_t obs_count = std::size_t(n);
  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    std::vector<std::vector<double>> raw(agent_count);
    if (cfg.variant == "I") {
      std::size_t pool_size = std::max(obs_count, obs_count * agent_count / 2);
      std::vector<double> pool(pool_size);
      for (double& x : pool) x = rng.uniform01();
      for (std::size_t k = 0; k < agent_count; ++k) {
        auto idx = rng.sample_without_replacement(pool_size, obs_count);
        raw[k].reserve(obs_count);
        for (std::size_t i : idx) raw[k].push_back(pool[i]);
      }
    } else {
      for (std::size_t k = 0; k < agent_count; ++k) {
        auto& obs = raw[k];
        obs.assign(obs_count, 0.0);
        std::size_t copied = 0;
        if (k > 0) {
          copied = std::size_t(std::lround(cfg.share * double(n)));
          auto idx = rng.sample_without_replacement(obs_count, copied);
          for (std::size_t i = 0; i < copied; ++i) obs[i] = raw[k - 1][idx[i]];
        }
        for (std::size_t i = copied; i < obs_count; ++i) obs[i] = rng.uniform01();
      }
    }

    std::vector<Interval> intervals;
    intervals.reserve(agent_count);
    double covered_agents = 0.0;
    double width_sum = 0.0;
    for (std::size_t k = 0; k < agent_count; ++k) {
      auto bits = randomized_response(raw[k], cfg.epsilon, rng);
      Interval iv = private_hoeffding_interval(bits, cfg.epsilon, cfg.alpha);
      covered_agents += iv.contains(target) ? 1.0 : 0.0;
      width_sum += iv.width();
      intervals.push_back(iv);
    }
    agent_cover[std::size_t(rep)] = covered_agents / double(k_agents);
    agent_tally.width[std::size_t(rep)] = width_sum / double(k_agents);

    WeightedFamily family(intervals);
    majority.record(rep, merge_majority(family).merged, target);
    randomized.record(rep, merge_randomized_at(family, rng.uniform01()).merged, target);
    rand_union.record(rep, merge_randomized_union_at(family, rng.uniform01()).merged, target);
    permuted.record(rep, merge_permuted_with(intervals, rng.permutation(intervals.size())).merged,
                    target);
  });

  ExperimentReport report;
  report.config = cfg;
  ReportRow agents_row = agent_tally.row("agent");
  agents_row.coverage = detail::mean_of(agent_cover);
  agents_row.mc_se = detail::sample_se(agent_cover);
  agents_row.frac_empty = 0.0;
  agents_row.frac_multipart = 0.0;
  report.rows.push_back(agents_row);
  report.rows.push_back(majority.row("majority"));
  report.rows.push_back(randomized.row("randomized"));
  report.rows.push_back(rand_union.row("randomized-union"));
  report.rows.push_back(permuted.row("permuted"));
  long floor_violations = 0;
  if (k_agents >= 2) {
    detail::check_coverage_floor(report.row("majority"),
                                 coverage_bounds(k_agents, cfg.alpha, MergeRule::majority).lower,
                                 floor_violations);
    detail::check_coverage_floor(report.row("randomized"),
                                 coverage_bounds(k_agents, cfg.alpha, MergeRule::randomized).lower,
                                 floor_violations);
    detail::check_coverage_floor(report.row("permuted"),
                                 coverage_bounds(k_agents, cfg.alpha, MergeRule::permuted).lower,
                                 floor_violations);
    detail::check_coverage_floor(
        report.row("randomized-union"),
        coverage_bounds(k_agents, cfg.alpha, MergeRule::randomized_union).lower,
        floor_violations);
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// The tight worst case for majority voting with odd K: either every agent
// reports the same covering set, or some ceil(K/2)-subset of agents misses.
// Every miss pattern has probability p chosen so each agent's marginal
// miscoverage is alpha; majority vote then errs with probability
// alpha*K/ceil(K/2).
inline ExperimentReport run_worstcase_dependence(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  const int k_agents = cfg.agents;
  if (k_agents < 1 || k_agents % 2 == 0)
    throw std::invalid_argument("worst-case: K must be odd");
  if (!(cfg.alpha >= 0.0 && cfg.alpha < 1.0))
    throw std::invalid_argument("worst-case: alpha must lie in [0,1)");
  const int half_up = (k_agents + 1) / 2;
  const double p_case = cfg.alpha / double(choose_u64(k_agents - 1, k_agents / 2));
  const std::uint64_t miss_patterns = choose_u64(k_agents, half_up);
  const double total_miss = p_case * double(miss_patterns);
  if (total_miss > 1.0)
    throw std::invalid_argument("worst-case: alpha too large for this K (case probabilities exceed 1)");

  const long reps = cfg.replications;
  detail::RuleTally majority(reps);
  std::vector<double> agent_miss(std::size_t(reps), 0.0);
  const Interval covering(-1.0, 1.0);
  const Interval missing(2.0, 3.0);
  const double target = 0.0;

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    double u = rng.uniform01();
    std::vector<Interval> sets(std::size_t(k_agents), covering);
    int misses = 0;
    if (u >= 1.0 - total_miss) {
      double offset = (u - (1.0 - total_miss)) / p_case;
      std::uint64_t rank = std::min<std::uint64_t>(std::uint64_t(offset), miss_patterns - 1);
      for (int who : unrank_combination(k_agents, half_up, rank)) {
        sets[std::size_t(who)] = missing;
        ++misses;
      }
    }
    agent_miss[std::size_t(rep)] = double(misses) / double(k_agents);
    majority.record(rep, merge_majority(WeightedFamily(sets)).merged, target);
  });

  ExperimentReport report;
  report.config = cfg;
  ReportRow agents_row;
  agents_row.name = "agent";
  agents_row.coverage = 1.0 - detail::mean_of(agent_miss);
  agents_row.mc_se = detail::sample_se(agent_miss);
  report.rows.push_back(agents_row);
  report.rows.push_back(majority.row("majority"));
  report.extras.emplace_back("expected_mv_miscoverage", cfg.alpha * double(k_agents) / double(half_up));
  long floor_violations = 0;
  if (k_agents >= 2 && cfg.alpha > 0.0) {
    detail::check_coverage_floor(report.row("majority"),
                                 coverage_bounds(k_agents, cfg.alpha, MergeRule::majority).lower,
                                 floor_violations);
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// K split-conformal intervals from independent random splits of the same
// linear-Gaussian data, each built at level 1 - alpha(1-tau), merged at vote
// threshold tau both symmetrically and as a running intersection over the
// split order.
inline ExperimentReport run_multisplit_conformal(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (!(cfg.tau > 0.0 && cfg.tau < 1.0))
    throw std::invalid_argument("multisplit-conformal: tau must lie in (0,1)");
  if (cfg.sample_size % 2 != 0)
    throw std::invalid_argument("multisplit-conformal: n must be even");
  if (cfg.dimension < 1 || cfg.sample_size / 2 <= cfg.dimension)
    throw std::invalid_argument("multisplit-conformal: need n/2 > d >= 1");
  const long reps = cfg.replications;
  const int n = cfg.sample_size;
  const int d = cfg.dimension;
  const int k_splits = cfg.agents;
  const double input_alpha = cfg.alpha * (1.0 - cfg.tau);

  detail::RuleTally majority(reps), exchangeable(reps);
  std::vector<double> inclusion_violation(std::size_t(reps), 0.0);

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    std::vector<double> beta(std::size_t(d), 0.0);
    for (double& b : beta) b = 2.0 * rng.normal();
    std::vector<std::vector<double>> x(std::size_t(n) + 1, std::vector<double>(std::size_t(d)));
    std::vector<double> y(std::size_t(n) + 1);
    for (std::size_t i = 0; i <= std::size_t(n); ++i) {
      double mean = 0.0;
      for (std::size_t j = 0; j < std::size_t(d); ++j) {
        x[i][j] = rng.normal();
        mean += x[i][j] * beta[j];
      }
      y[i] = mean + rng.normal();
    }
    const auto& x_test = x[std::size_t(n)];
    const double y_test = y[std::size_t(n)];

    std::vector<Interval> intervals;
    intervals.reserve(std::size_t(k_splits));
    const int half = n / 2;
    for (int split = 0; split < k_splits; ++split) {
      auto perm = rng.permutation(std::size_t(n));
      std::vector<std::vector<double>> gram(std::size_t(d), std::vector<double>(std::size_t(d), 0.0));
      std::vector<double> moment(std::size_t(d), 0.0);
      for (int i = 0; i < half; ++i) {
        const auto& row = x[perm[std::size_t(i)]];
        double yi = y[perm[std::size_t(i)]];
        for (std::size_t a = 0; a < std::size_t(d); ++a) {
          moment[a] += row[a] * yi;
          for (std::size_t b = a; b < std::size_t(d); ++b) gram[a][b] += row[a] * row[b];
        }
      }
      for (std::size_t a = 0; a < std::size_t(d); ++a)
        for (std::size_t b = 0; b < a; ++b) gram[a][b] = gram[b][a];
      std::vector<double> fit = detail::solve_linear(std::move(gram), std::move(moment));

      std::vector<double> residuals;
      residuals.reserve(std::size_t(half));
      for (int i = half; i < n; ++i) {
        const auto& row = x[perm[std::size_t(i)]];
        double pred = 0.0;
        for (std::size_t a = 0; a < std::size_t(d); ++a) pred += row[a] * fit[a];
        residuals.push_back(std::fabs(y[perm[std::size_t(i)]] - pred));
      }
      std::sort(residuals.begin(), residuals.end());
      std::size_t m = residuals.size();
      std::size_t idx = std::size_t(std::ceil((1.0 - input_alpha) * double(m + 1)));
      double pred = 0.0;
      for (std::size_t a = 0; a < std::size_t(d); ++a) pred += x_test[a] * fit[a];
      if (idx > m) {
        intervals.push_back(Interval::whole_line());
      } else {
        double q = residuals[idx - 1];
        intervals.push_back(Interval(pred - q, pred + q, true, true));
      }
    }

    IntervalUnion cm = merge_tau(WeightedFamily(intervals), cfg.tau).merged;
    IntervalUnion ce = merge_exchangeable(intervals, cfg.tau).merged;
    majority.record(rep, cm, y_test);
    exchangeable.record(rep, ce, y_test);
    inclusion_violation[std::size_t(rep)] = subset_of(ce, cm) ? 0.0 : 1.0;
  });

  ExperimentReport report;
  report.config = cfg;
  report.rows.push_back(majority.row("majority"));
  report.rows.push_back(exchangeable.row("exchangeable"));
  report.extras.emplace_back("inclusion_violations",
                             pairwise_sum(inclusion_violation));
  long floor_violations = 0;
  if (k_splits >= 2) {
    detail::check_coverage_floor(
        report.row("majority"),
        coverage_bounds(k_splits, input_alpha, MergeRule::tau, cfg.tau).lower, floor_violations);
    detail::check_coverage_floor(
        report.row("exchangeable"),
        coverage_bounds(k_splits, input_alpha, MergeRule::exchangeable, cfg.tau).lower,
        floor_violations);
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// Median-of-means replicated over independent re-bucketings of one sample,
// with the running median as the derandomized path; reports the averaged
// step-size curve and how often the final estimate lands near the truth.
inline ExperimentReport run_momom(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.agents < 1) throw std::invalid_argument("momom: replicate count must be >= 1");
  if (cfg.mom_buckets < 1 || cfg.mom_buckets > cfg.sample_size)
    throw std::invalid_argument("momom: bucket count must lie in [1, n]");
  const long reps = cfg.replications;
  const int k_rep = cfg.agents;
  const double band = 0.25;

  const std::size_t rep_count = std::size_t(reps);
  std::vector<std::vector<double>> deltas(rep_count);
  std::vector<double> final_abs_error(std::size_t(reps), 0.0);
  std::vector<double> within_band(std::size_t(reps), 0.0);

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    std::vector<double> data(std::size_t(cfg.sample_size), 0.0);
    for (double& v : data) v = rng.student_t3();
    std::vector<double> estimates;
    estimates.reserve(std::size_t(k_rep));
    for (int k = 0; k < k_rep; ++k) estimates.push_back(mom(data, cfg.mom_buckets, rng));
    std::vector<double> path = running_median(estimates);
    auto& delta = deltas[std::size_t(rep)];
    delta.resize(path.size() > 1 ? path.size() - 1 : 0);
    for (std::size_t k = 1; k < path.size(); ++k) delta[k - 1] = std::fabs(path[k] - path[k - 1]);
    final_abs_error[std::size_t(rep)] = std::fabs(path.back());
    within_band[std::size_t(rep)] = final_abs_error[std::size_t(rep)] <= band ? 1.0 : 0.0;
  });

  ExperimentReport report;
  report.config = cfg;
  ReportRow row;
  row.name = "momom";
  row.coverage = detail::mean_of(within_band);  // fraction of runs within +-0.25 of the mean
  row.avg_width = detail::mean_of(final_abs_error);
  row.mc_se = std::sqrt(std::max(0.0, row.coverage * (1.0 - row.coverage) / double(reps)));
  report.rows.push_back(row);

  std::vector<double> curve(std::size_t(std::max(0, k_rep - 1)), 0.0);
  std::vector<double> column(rep_count, 0.0);
  for (std::size_t k = 0; k < curve.size(); ++k) {
    for (std::size_t r = 0; r < std::size_t(reps); ++r) column[r] = deltas[r][k];
    curve[k] = detail::mean_of(column);
  }
  report.curves.emplace_back("avg_abs_delta", curve);  // entry k-2 is E|m_k - m_{k-1}|
  if (curve.size() >= 49) {
    report.extras.emplace_back("avg_delta_k5", curve[3]);
    report.extras.emplace_back("avg_delta_k50", curve[48]);
  }
  return report;
}

// Convex-hull intervals over median-of-means bucket estimates from K
// independent splits, merged by majority vote and by running intersection.
inline ExperimentReport run_hulc_mom(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.agents < 1) throw std::invalid_argument("hulc-mom: split count must be >= 1");
  const long reps = cfg.replications;
  const int k_splits = cfg.agents;
  const int b1 = cfg.mom_buckets;
  const bool b1_even = b1 % 2 == 0;  // median-unbiasedness argument needs odd B_1
  const int b2 = hulc_split_count(cfg.alpha);
  if (cfg.sample_size < b2)
    throw std::invalid_argument("hulc-mom: fewer data points than hull buckets");
  const double target = 0.0;

  detail::RuleTally majority(reps), exchangeable(reps);
  std::vector<double> monotone_violation(std::size_t(reps), 0.0);
  const std::size_t split_count = std::size_t(k_splits);
  const std::size_t rep_count = std::size_t(reps);
  // Per-prefix traces: coverage and width of both merges as splits accrue.
  std::vector<std::vector<double>> ce_cover(rep_count), ce_width(rep_count),
      cm_cover(rep_count), cm_width(rep_count);

  BucketEstimator estimator = [b1](std::span<const double> bucket, Rng& r) {
    return mom(bucket, std::min<int>(b1, int(bucket.size())), r);
  };

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    std::vector<double> data(std::size_t(cfg.sample_size), 0.0);
    for (double& v : data) v = rng.student_t3();

    std::vector<Interval> intervals;
    intervals.reserve(split_count);
    for (int k = 0; k < k_splits; ++k)
      intervals.push_back(hulc_interval(data, cfg.alpha, rng, estimator));

    auto& ce_c = ce_cover[std::size_t(rep)];
    auto& ce_w = ce_width[std::size_t(rep)];
    auto& cm_c = cm_cover[std::size_t(rep)];
    auto& cm_w = cm_width[std::size_t(rep)];
    SequentialMerger merger;
    IntervalUnion prefix_vote;
    double last_width = kInf;
    bool violated = false;
    for (std::size_t k = 0; k < split_count; ++k) {
      const IntervalUnion& running = merger.update(intervals[k]);
      double w = running.measure();
      if (w > last_width) violated = true;
      last_width = w;
      ce_c.push_back(running.contains(target) ? 1.0 : 0.0);
      ce_w.push_back(w);
      prefix_vote = merge_majority(WeightedFamily(std::vector<Interval>(
                                       intervals.begin(), intervals.begin() + long(k) + 1)))
                        .merged;
      cm_c.push_back(prefix_vote.contains(target) ? 1.0 : 0.0);
      cm_w.push_back(prefix_vote.measure());
    }
    monotone_violation[std::size_t(rep)] = violated ? 1.0 : 0.0;
    majority.record(rep, prefix_vote, target);
    exchangeable.record(rep, merger.running(), target);
  });

  ExperimentReport report;
  report.config = cfg;
  auto average_trace = [&](const std::vector<std::vector<double>>& trace) {
    std::vector<double> curve(split_count, 0.0);
    std::vector<double> column(rep_count, 0.0);
    for (std::size_t k = 0; k < split_count; ++k) {
      for (std::size_t r = 0; r < rep_count; ++r) column[r] = trace[r][k];
      curve[k] = detail::mean_of(column);
    }
    return curve;
  };
  report.curves.emplace_back("vote_coverage_vs_k", average_trace(cm_cover));
  report.curves.emplace_back("vote_width_vs_k", average_trace(cm_width));
  report.curves.emplace_back("running_coverage_vs_k", average_trace(ce_cover));
  report.curves.emplace_back("running_width_vs_k", average_trace(ce_width));
  report.rows.push_back(majority.row("majority"));
  report.rows.push_back(exchangeable.row("exchangeable"));
  report.extras.emplace_back("ce_width_monotone_violations", pairwise_sum(monotone_violation));
  report.extras.emplace_back("hull_buckets", double(b2));
  if (b1_even) report.extras.emplace_back("b1_even_warning", 1.0);
  long floor_violations = 0;
  double input_miss = std::ldexp(1.0, 1 - b2);  // 2^(1-B2)
  if (k_splits >= 2) {
    detail::check_coverage_floor(report.row("majority"),
                                 coverage_bounds(k_splits, input_miss, MergeRule::majority).lower,
                                 floor_violations);
    detail::check_coverage_floor(
        report.row("exchangeable"),
        coverage_bounds(k_splits, input_miss, MergeRule::exchangeable).lower, floor_violations);
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// One replication of the lambda-sampling scenario: a map from the sampled
// parameter to that parameter's interval, plus the realized target.
struct LambdaReplication {
  std::function<Interval(double)> interval_for;
  double target = 0.0;
};

// Merge an uncountable family indexed by a parameter with a prior: sample N
// parameter values from the prior, build their intervals, and merge with the
// randomized majority vote.
inline ExperimentReport run_lambda_sampling(
    const ExperimentConfig& cfg, const std::function<double(Rng&)>& prior,
    const std::function<LambdaReplication(Rng&)>& make_replication) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.lambda_draws < 1) throw std::invalid_argument("lambda-sampling: N must be >= 1");
  const long reps = cfg.replications;
  detail::RuleTally randomized(reps);

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    LambdaReplication replication = make_replication(rng);
    std::vector<Interval> intervals;
    intervals.reserve(std::size_t(cfg.lambda_draws));
    for (int i = 0; i < cfg.lambda_draws; ++i)
      intervals.push_back(replication.interval_for(prior(rng)));
    WeightedFamily family(std::move(intervals));
    randomized.record(rep, merge_randomized_at(family, rng.uniform01()).merged,
                      replication.target);
  });

  ExperimentReport report;
  report.config = cfg;
  report.rows.push_back(randomized.row("randomized"));
  long floor_violations = 0;
  if (cfg.lambda_draws >= 2) {
    detail::check_coverage_floor(
        report.row("randomized"),
        coverage_bounds(cfg.lambda_draws, cfg.alpha, MergeRule::randomized).lower,
        floor_violations);
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// Default toy: Gaussian mean with asymmetric two-sided intervals. lambda
// splits the miscoverage budget between the tails, so every lambda gives an
// exact level 1-alpha interval around the same sample mean.
inline ExperimentReport run_lambda_sampling(const ExperimentConfig& cfg) {
  const double alpha = cfg.alpha;
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("lambda-sampling: alpha must lie in (0,1)");
  const double scale = 1.0 / std::sqrt(double(cfg.sample_size));
  auto prior = [](Rng& rng) { return 0.05 + 0.9 * rng.uniform01(); };
  auto make_replication = [alpha, scale](Rng& rng) {
    double sample_mean = scale * rng.normal();
    LambdaReplication rep;
    rep.target = 0.0;
    rep.interval_for = [alpha, scale, sample_mean](double lambda) {
      double lo = sample_mean - scale * normal_quantile(1.0 - lambda * alpha);
      double hi = sample_mean + scale * normal_quantile(1.0 - (1.0 - lambda) * alpha);
      return Interval(lo, hi, true, true);
    };
    return rep;
  };
  return run_lambda_sampling(cfg, prior, make_replication);
}

// Exchangeable-null p-values from a common Gaussian factor (correlation 1/2,
// uniform marginals): checks super-uniformity of the doubled median and that
// the randomized order-statistic combination never exceeds the plain one.
inline ExperimentReport run_ruger_validity(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.agents < 1) throw std::invalid_argument("ruger-validity: K must be >= 1");
  const long reps = cfg.replications;
  const int k_pvalues = cfg.agents;
  const std::vector<double> levels = {0.01, 0.05, 0.1};
  const double root_half = std::sqrt(0.5);

  std::vector<std::vector<double>> rejected(levels.size(),
                                            std::vector<double>(std::size_t(reps), 0.0));
  std::vector<double> randomized_above_plain(std::size_t(reps), 0.0);

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    double common = rng.normal();
    std::vector<double> pvals(std::size_t(k_pvalues), 0.0);
    for (double& p : pvals) p = normal_cdf(root_half * common + root_half * rng.normal());
    PValueVector pv(pvals);
    double merged = ruger_median(pv);
    for (std::size_t a = 0; a < levels.size(); ++a)
      rejected[a][std::size_t(rep)] = merged <= levels[a] ? 1.0 : 0.0;

    int k_mid = (k_pvalues + 1) / 2;
    double plain = ruger(pv, k_mid);
    double randomized = ruger_randomized_at(pv, k_mid, rng.uniform_pos());
    randomized_above_plain[std::size_t(rep)] = randomized > plain ? 1.0 : 0.0;
  });

  ExperimentReport report;
  report.config = cfg;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    ReportRow row;
    row.name = "ruger-median@" + std::to_string(levels[a]).substr(0, 4);
    row.coverage = detail::mean_of(rejected[a]);  // rejection rate, to compare against alpha
    row.mc_se = std::sqrt(std::max(0.0, row.coverage * (1.0 - row.coverage) / double(reps)));
    report.rows.push_back(row);
  }
  report.extras.emplace_back("randomized_above_plain", pairwise_sum(randomized_above_plain));
  long floor_violations = 0;
  for (std::size_t a = 0; a < levels.size(); ++a) {
    const ReportRow& row = report.rows[a];
    if (row.coverage > levels[a] + 3.0 * row.mc_se) ++floor_violations;
  }
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

// Synthetic label families whose inputs each control the weighted
// miscoverage loss at level alpha; merging must control it at 2*alpha. Labels
// carry costs (8+y)/18 on a ten-label space, bound 1.
inline ExperimentReport run_risk_control(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("replications must be >= 1");
  if (cfg.agents < 1) throw std::invalid_argument("risk-control: K must be >= 1");
  const long reps = cfg.replications;
  const int k_sets = cfg.agents;
  const std::size_t labels = 10;
  std::vector<double> costs(labels);
  for (std::size_t y = 0; y < labels; ++y) costs[y] = (9.0 + double(y)) / 18.0;
  LossSpec spec(costs, 1.0);
  const double mean_cost = pairwise_sum(costs) / double(labels);
  // Exclusion probability of the true label per input, calibrated so each
  // input's risk mean_cost * q stays below alpha.
  const double q_exclude = 0.9 * cfg.alpha / mean_cost;
  if (q_exclude > 1.0) throw std::invalid_argument("risk-control: alpha too large to calibrate");

  std::vector<double> input_risk(std::size_t(reps), 0.0);
  std::vector<double> majority_risk(std::size_t(reps), 0.0);
  std::vector<double> weighted_risk(std::size_t(reps), 0.0);
  std::vector<double> majority_size(std::size_t(reps), 0.0);
  std::vector<double> weighted_size(std::size_t(reps), 0.0);
  std::vector<double> auto_included(std::size_t(reps), 0.0);

  detail::run_replications(reps, cfg.threads, [&](long rep) {
    Rng rng(derive_seed(cfg.master_seed, std::uint64_t(rep)));
    std::size_t truth = std::size_t(rng.below(labels));
    std::vector<std::vector<bool>> members(std::size_t(k_sets),
                                           std::vector<bool>(labels, false));
    double risk_sum = 0.0;
    for (int k = 0; k < k_sets; ++k) {
      auto& row = members[std::size_t(k)];
      for (std::size_t y = 0; y < labels; ++y) {
        if (y == truth) {
          row[y] = !rng.bernoulli(q_exclude);
        } else {
          row[y] = rng.bernoulli(0.5);
        }
      }
      if (!row[truth]) risk_sum += spec.per_label_cost[truth];
    }
    input_risk[std::size_t(rep)] = risk_sum / double(k_sets);

    LabelSetFamily family(members);
    RiskMergeOutcome cm = risk_merge_majority(family, spec);
    RiskMergeOutcome cw = risk_merge_weighted_at(family, spec, rng.uniform01());
    majority_risk[std::size_t(rep)] = cm.included[truth] ? 0.0 : spec.per_label_cost[truth];
    weighted_risk[std::size_t(rep)] = cw.included[truth] ? 0.0 : spec.per_label_cost[truth];
    majority_size[std::size_t(rep)] = double(cm.set_size());
    weighted_size[std::size_t(rep)] = double(cw.set_size());
    auto_included[std::size_t(rep)] = cm.auto_included_any ? 1.0 : 0.0;
  });

  ExperimentReport report;
  report.config = cfg;
  auto make_row = [&](std::string name, std::span<const double> risk, std::span<const double> size) {
    ReportRow row;
    row.name = std::move(name);
    row.coverage = detail::mean_of(risk);  // empirical risk, to compare against 2*alpha
    row.avg_width = size.empty() ? 0.0 : detail::mean_of(size);
    row.mc_se = detail::sample_se(risk);
    return row;
  };
  report.rows.push_back(make_row("input", input_risk, {}));
  report.rows.push_back(make_row("majority", majority_risk, majority_size));
  report.rows.push_back(make_row("weighted", weighted_risk, weighted_size));
  report.extras.emplace_back("auto_included_fraction", detail::mean_of(auto_included));
  long floor_violations = 0;
  if (report.row("input").coverage > cfg.alpha + 3.0 * report.row("input").mc_se)
    ++floor_violations;
  if (report.row("majority").coverage >
      2.0 * cfg.alpha + 3.0 * report.row("majority").mc_se)
    ++floor_violations;
  if (report.row("weighted").coverage >
      2.0 * cfg.alpha + 3.0 * report.row("weighted").mc_se)
    ++floor_violations;
  report.extras.emplace_back("coverage_floor_violations", double(floor_violations));
  return report;
}

inline ExperimentReport run_scenario(const ExperimentConfig& cfg) {
  if (cfg.scenario == "private-agents") return run_private_agents(cfg);
  if (cfg.scenario == "worst-case") return run_worstcase_dependence(cfg);
  if (cfg.scenario == "multisplit-conformal") return run_multisplit_conformal(cfg);
  if (cfg.scenario == "momom") return run_momom(cfg);
  if (cfg.scenario == "hulc-mom") return run_hulc_mom(cfg);
  if (cfg.scenario == "lambda-sampling") return run_lambda_sampling(cfg);
  if (cfg.scenario == "ruger-validity") return run_ruger_validity(cfg);
  if (cfg.scenario == "risk-control") return run_risk_control(cfg);
  throw std::invalid_argument("unknown scenario: " + cfg.scenario);
}

}  // namespace setvote

#endif  // SETVOTE_SIMULATE_HPP
