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
// Command-line front end: merge interval files, run the simulation
// scenarios, and combine p-values. Exit codes: 0 success, 2 usage or domain
// error, 3 internal error. Randomized paths never consume ambient
// randomness; without --seed they use the fixed default 0 and say so.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setvote/io.hpp"
#include "setvote/setvote.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, bool randomized_path) {
  if (seed) return *seed;
  if (randomized_path)
    std::cerr << "warning: randomized method without --seed; using fixed default 0\n";
  return 0;
}

struct MergeArgs {
  std::string input;
  std::string method = "majority";
  double tau = 0.5;
  double alpha = 0.1;
  std::optional<std::uint64_t> seed;
  std::string weights_path;
  std::vector<std::size_t> chain;
};

int run_merge(const MergeArgs& args) {
  std::ifstream in(args.input);
  if (!in) throw UsageError("cannot open input file '" + args.input + "'");
  std::vector<setvote::IntervalRecord> records = setvote::parse_interval_records(in);
  if (records.empty()) throw UsageError("no intervals in '" + args.input + "'");

  if (!args.weights_path.empty()) {
    std::ifstream win(args.weights_path);
    if (!win) throw UsageError("cannot open weights file '" + args.weights_path + "'");
    std::vector<double> weights;
    double w;
    while (win >> w) weights.push_back(w);
    if (weights.size() != records.size())
      throw UsageError("weights file must hold one weight per interval");
    for (std::size_t i = 0; i < records.size(); ++i) records[i].weight = weights[i];
  }

  setvote::WeightedFamily family = setvote::family_from_records(records);
  std::vector<setvote::Interval> sets = family.sets();

  setvote::MergeOutcome outcome;
  if (args.method == "majority") {
    outcome = setvote::merge_majority(family);
  } else if (args.method == "tau") {
    outcome = setvote::merge_tau(family, args.tau);
  } else if (args.method == "weighted") {
    outcome = setvote::merge_weighted(family, resolve_seed(args.seed, true), /*randomize=*/true);
  } else if (args.method == "randomized") {
    outcome = setvote::merge_randomized(family, resolve_seed(args.seed, true));
  } else if (args.method == "randomized-union") {
    outcome = setvote::merge_randomized_union(family, resolve_seed(args.seed, true));
  } else if (args.method == "exchangeable") {
    outcome = setvote::merge_exchangeable(sets, args.tau);
  } else if (args.method == "permuted") {
    outcome = setvote::merge_permuted(sets, resolve_seed(args.seed, true), args.tau);
  } else if (args.method == "independent") {
    outcome = setvote::merge_independent(family, args.alpha);
  } else if (args.method == "median-midpoints") {
    outcome.merged = setvote::median_of_midpoints(sets);
    outcome.rule = setvote::MergeRule::median_midpoints;
  } else if (args.method == "nested-aware") {
    outcome = setvote::merge_nested_aware(family, args.chain);
  } else {
    throw UsageError("unknown method '" + args.method + "'");
  }

  std::cout << setvote::to_json(outcome).dump() << "\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string scenario;
  std::optional<long> reps;
  std::optional<std::uint64_t> seed;
  std::optional<int> agents;
  std::optional<int> sample_size;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> tau;
  std::optional<double> share;
  std::optional<int> mom_buckets;
  std::optional<int> dimension;
  std::optional<int> lambda_draws;
  std::optional<std::string> variant;
  int threads = 0;
  std::string out = "report";
};

int run_simulate(const SimulateArgs& args) {
  setvote::ExperimentConfig cfg = setvote::default_config(args.scenario);
  if (args.reps) cfg.replications = *args.reps;
  if (args.seed) cfg.master_seed = *args.seed;
  if (args.agents) cfg.agents = *args.agents;
  if (args.sample_size) cfg.sample_size = *args.sample_size;
  if (args.alpha) cfg.alpha = *args.alpha;
  if (args.epsilon) cfg.epsilon = *args.epsilon;
  if (args.tau) cfg.tau = *args.tau;
  if (args.share) cfg.share = *args.share;
  if (args.mom_buckets) cfg.mom_buckets = *args.mom_buckets;
  if (args.dimension) cfg.dimension = *args.dimension;
  if (args.lambda_draws) cfg.lambda_draws = *args.lambda_draws;
  if (args.variant) cfg.variant = *args.variant;
  cfg.threads = args.threads;
  if (cfg.replications < 1) throw UsageError("replications must be >= 1");

  setvote::ExperimentReport report = setvote::run_scenario(cfg);

  std::ofstream csv(args.out + ".csv");
  if (!csv) throw UsageError("cannot write '" + args.out + ".csv'");
  csv << setvote::report_to_csv(report);
  std::ofstream json_out(args.out + ".json");
  if (!json_out) throw UsageError("cannot write '" + args.out + ".json'");
  json_out << setvote::report_to_json(report).dump(2) << "\n";
  if (!report.curves.empty()) {
    std::ofstream curves(args.out + ".curves.csv");
    if (!curves) throw UsageError("cannot write '" + args.out + ".curves.csv'");
    curves << setvote::curves_to_csv(report);
  }
  std::cout << setvote::config_to_json(report.config).dump() << "\n";
  return kExitOk;
}

struct PMergeArgs {
  std::vector<double> pvalues;
  std::string rule = "median";
  std::optional<int> k;
  std::optional<std::uint64_t> seed;
};

int run_pmerge(const PMergeArgs& args) {
  setvote::PValueVector p(args.pvalues);
  int k = args.k.value_or((int(p.size()) + 1) / 2);
  double merged;
  if (args.rule == "median") {
    merged = setvote::ruger_median(p);
  } else if (args.rule == "ruger") {
    merged = setvote::ruger(p, k);
  } else if (args.rule == "ruger-randomized") {
    merged = setvote::ruger_randomized(p, k, resolve_seed(args.seed, true));
  } else {
    throw UsageError("unknown rule '" + args.rule + "'");
  }
  std::printf("%.12g\n", merged);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setvote: majority-vote merging of uncertainty intervals"};
  app.require_subcommand(1);

  MergeArgs merge_args;
  CLI::App* merge = app.add_subcommand("merge", "merge an interval file into one set");
  merge->add_option("--input,-i", merge_args.input, "CSV interval file")->required();
  merge->add_option("--method,-m", merge_args.method,
                    "majority|tau|weighted|randomized|randomized-union|exchangeable|"
                    "permuted|independent|median-midpoints|nested-aware");
  merge->add_option("--tau", merge_args.tau, "vote threshold for tau/exchangeable/permuted");
  merge->add_option("--alpha", merge_args.alpha, "level for the independent-sets rule");
  merge->add_option("--seed", merge_args.seed, "seed for randomized methods");
  merge->add_option("--weights", merge_args.weights_path, "file with one weight per interval");
  merge->add_option("--chain", merge_args.chain,
                    "indices of a nested chain for nested-aware (comma separated)")
      ->delimiter(',');

  SimulateArgs sim_args;
  CLI::App* sim = app.add_subcommand("simulate", "run a Monte Carlo scenario");
  sim->add_option("--scenario,-s", sim_args.scenario, "scenario name")
      ->required()
      ->check(CLI::IsMember(setvote::scenario_names()));
  sim->add_option("--reps", sim_args.reps, "number of replications");
  sim->add_option("--seed", sim_args.seed, "master seed (default 0)");
  sim->add_option("--agents,-K", sim_args.agents, "number of sets/splits/replicates");
  sim->add_option("--n", sim_args.sample_size, "per-agent sample size");
  sim->add_option("--alpha", sim_args.alpha, "miscoverage level");
  sim->add_option("--eps", sim_args.epsilon, "local privacy parameter");
  sim->add_option("--tau", sim_args.tau, "vote threshold");
  sim->add_option("--share", sim_args.share, "shared-observation fraction (variant II)");
  sim->add_option("--buckets,-B", sim_args.mom_buckets, "median-of-means bucket count");
  sim->add_option("--d", sim_args.dimension, "regression dimension");
  sim->add_option("--N", sim_args.lambda_draws, "sampled parameter count");
  sim->add_option("--variant", sim_args.variant, "private-agents data scenario (I or II)");
  sim->add_option("--threads", sim_args.threads, "worker threads (0 = hardware)");
  sim->add_option("--out,-o", sim_args.out, "output path base (writes .csv and .json)");

  PMergeArgs pmerge_args;
  CLI::App* pmerge = app.add_subcommand("pmerge", "combine dependent p-values");
  pmerge->add_option("pvalues", pmerge_args.pvalues, "p-values in [0,1]")->required();
  pmerge->add_option("--rule,-r", pmerge_args.rule, "ruger|median|ruger-randomized");
  pmerge->add_option("--k", pmerge_args.k, "order statistic (default ceil(K/2))");
  pmerge->add_option("--seed", pmerge_args.seed, "seed for ruger-randomized");

  try {
    app.parse(argc, argv);
    if (merge->parsed()) return run_merge(merge_args);
    if (sim->parsed()) return run_simulate(sim_args);
    if (pmerge->parsed()) return run_pmerge(pmerge_args);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const setvote::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
