#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drinv/dqn.hpp"
#include "drinv/mdp.hpp"
#include "drinv/stats.hpp"
#include "drinv/tabular.hpp"

namespace drinv {

struct CatalogSource {
  // Synthetic when `path` is empty.
  int products = 20;
  std::uint64_t seed = 7;
  std::filesystem::path path;
  std::filesystem::path demand_path;

  bool operator==(const CatalogSource&) const = default;
};

struct CapacitySpec {
  // Explicit capacities win; otherwise `fraction` of mean aggregate demand.
  std::optional<double> max_volume;
  std::optional<double> max_weight;
  double fraction = 0.7;

  bool operator==(const CapacitySpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  CatalogSource catalog;
  CapacitySpec constraints;
  RewardParams reward;
  double initial_cover = 2.0;
  Algorithm algorithm = Algorithm::drdqn;
  DelayConfig delay;
  TrainConfig train;
  std::vector<std::uint64_t> seeds = {0};
  std::filesystem::path output_dir = "runs";
  // Seeds trained concurrently.
  int jobs = 1;
  // Per-verb settings.
  std::vector<int> sweep_delays = {1, 2, 5, 10};
  int act_vs_obs_delay = 5;
  int stochastic_k_max = 10;
  int moving_average_window = 20;
  // Fraction of final episodes averaged into "final performance".
  double final_fraction = 0.1;

  // Seeds non-empty and distinct, referenced files exist, nested configs valid.
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& cfg);

// `key` is a dotted path such as "train.episodes"; `value` is parsed as JSON
// when possible and taken as a string otherwise. Applied to the JSON document
// before typed parsing.
std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides);

// Everything a training run needs, resolved from an ExperimentConfig.
struct ResolvedSetup {
  DemandSource demand;
  EnvConfig env;
};

ResolvedSetup resolve(const ExperimentConfig& cfg);

struct MetricsRow {
  std::string run_id;
  std::uint64_t seed = 0;
  int episode = 0;
  int delay = 0;
  double business_reward = 0.0;
  long long sales = 0;
  long long wastage = 0;
  long long unmet = 0;
  long long holding = 0;
  double epsilon = 0.0;
  double wall_ms = 0.0;
};

extern const char* const kMetricsHeader;
void write_metrics_row(std::ostream& out, const MetricsRow& row);
std::vector<MetricsRow> load_metrics(const std::filesystem::path& path);

struct RunResult {
  std::string run_id;
  std::filesystem::path dir;
  std::map<std::uint64_t, std::vector<MetricsRow>> by_seed;
  std::map<std::uint64_t, QNetwork> nets;

  std::vector<double> rewards(std::uint64_t seed) const;
};

std::string run_id_for(const ExperimentConfig& cfg);

// One training run per seed. Writes <out>/<run_id>/{config.json, seed_<s>.csv,
// summary.csv, seed_<s>.qnet}; metrics rows are flushed as episodes finish.
// Fails with ConfigError before any training when the config is invalid or
// the output directory is unusable.
RunResult run_experiment(const ExperimentConfig& cfg);

// Per-episode mean and 95% interval across seeds.
struct SummaryRow {
  int episode = 0;
  stats::Interval interval;
};
std::vector<SummaryRow> summarize(const std::map<std::uint64_t, std::vector<MetricsRow>>& by_seed);

struct FinalRow {
  std::string label;  // e.g. "dqn"
  int delay = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<double> finals;  // per seed, same order as seeds
  stats::Interval interval;
};

FinalRow final_performance(const std::string& label, int delay,
                           const std::map<std::uint64_t, std::vector<MetricsRow>>& by_seed,
                           double fraction);

// Mean final business reward per (algorithm, delay) for DQN and DRDQN under
// constant action delays. Writes sweep_delay.csv and sweep_delay_seeds.csv.
std::vector<FinalRow> figure_delay_sweep(const ExperimentConfig& cfg, const std::vector<int>& delays);

struct ActVsObsResult {
  std::vector<FinalRow> rows;  // drdqn/action, drdqn/observation, dqn/action, dqn/observation
  double relative_gap = 0.0;   // |drdqn_act - drdqn_obs| / max(|drdqn_act|, |drdqn_obs|)
};

ActVsObsResult figure_act_vs_obs(const ExperimentConfig& cfg, int delay);

struct StochasticResult {
  std::map<std::string, RunResult> runs;  // keyed "dqn", "drdqn"
  // Per seed, mean of the window-20 moving average over the final 50 episodes.
  std::map<std::string, std::vector<double>> final_moving_average;
  std::vector<std::uint64_t> seeds;
};

StochasticResult figure_stochastic(const ExperimentConfig& cfg, int k_max);

struct OracleCase {
  int delay = 0;
  AugmentedMDP mdp;
  MdpSolution exact;
  TabularResult learned;
  CertificationReport report;
};

struct OracleSuiteConfig {
  std::vector<int> delays = {0, 1, 2};
  TabularConfig tabular;
  long min_visits = 50;
  double value_tolerance = 1e-10;
  double q_error_fraction = 0.05;
  std::uint64_t seed = 0;
};

// Certifies tabular learning over information states against value iteration
// on the explicitly enumerated augmented tiny inventory MDP. A case passes with
// no mismatches, no suboptimal greedy actions and a bounded Q error.
std::vector<OracleCase> run_oracle_suite(const OracleSuiteConfig& cfg = {});
bool oracle_suite_passed(const std::vector<OracleCase>& cases, const OracleSuiteConfig& cfg);
void write_oracle_reports(const std::vector<OracleCase>& cases, const std::filesystem::path& dir,
                          long min_visits = 50);

}  // namespace drinv
