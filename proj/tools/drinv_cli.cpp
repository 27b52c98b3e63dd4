// drinv: experiment harness for delay-resolved inventory replenishment.
//
//   drinv oracle      [--out DIR]
//   drinv train       --config FILE [--out DIR] [--seeds LIST] [--override k=v]...
//   drinv sweep-delay --config FILE ...
//   drinv act-vs-obs  --config FILE ...
//   drinv stochastic  --config FILE ...
//
// Exit status: 0 success, 1 configuration or I/O error, 2 oracle certification failure.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "drinv/error.hpp"
#include "drinv/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitOracle = 2;

struct CommonOptions {
  std::string config;
  std::string out;
  std::string seeds;
  std::vector<std::string> overrides;
};

// "0,1,2" or "0-9" or a mix ("0-4,10").
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
      } else {
        const auto lo = std::stoull(part.substr(0, dash));
        const auto hi = std::stoull(part.substr(dash + 1));
        if (hi < lo) throw drinv::ConfigError("--seeds: empty range '" + part + "'");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw drinv::ConfigError("--seeds: cannot parse '" + part + "'");
    }
  }
  if (out.empty()) throw drinv::ConfigError("--seeds: no seeds given");
  return out;
}

drinv::ExperimentConfig load(const CommonOptions& o) {
  std::ifstream in(o.config);
  if (!in) throw drinv::ConfigError(o.config + ": cannot open config");
  std::stringstream text;
  text << in.rdbuf();
  std::vector<std::pair<std::string, std::string>> kv;
  for (const auto& item : o.overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw drinv::ConfigError("--override expects key=value, got '" + item + "'");
    kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  auto cfg = drinv::parse_config(drinv::apply_overrides(text.str(), kv));
  if (!o.out.empty()) cfg.output_dir = o.out;
  if (!o.seeds.empty()) cfg.seeds = parse_seeds(o.seeds);
  cfg.validate();
  return cfg;
}

void print_finals(const std::vector<drinv::FinalRow>& rows) {
  std::cout << std::left << std::setw(20) << "variant" << std::setw(7) << "delay" << std::setw(5) << "n"
            << "mean final [95% CI]\n";
  for (const auto& r : rows)
    std::cout << std::left << std::setw(20) << r.label << std::setw(7) << r.delay << std::setw(5)
              << r.interval.n << std::fixed << std::setprecision(3) << r.interval.mean << " ["
              << r.interval.low << ", " << r.interval.high << "]\n"
              << std::defaultfloat;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool config_required) {
  auto* c = cmd->add_option("--config", o.config, "Experiment config (JSON)");
  if (config_required) c->required();
  cmd->add_option("--out", o.out, "Output directory (overrides output_dir)");
  cmd->add_option("--seeds", o.seeds, "Seeds, e.g. 0-9 or 1,2,3");
  cmd->add_option("--override", o.overrides, "Config override key=value (dotted keys)")->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-resolved inventory replenishment experiments"};
  app.require_subcommand(1);

  CommonOptions oracle_opts, train_opts, sweep_opts, avo_opts, stoch_opts;
  auto* oracle = app.add_subcommand("oracle", "Certify delay-resolved tabular learning against exact value iteration");
  add_common(oracle, oracle_opts, false);
  auto* train = app.add_subcommand("train", "Train one configuration over the listed seeds");
  add_common(train, train_opts, true);
  auto* sweep = app.add_subcommand("sweep-delay", "DQN vs DRDQN across constant lead times");
  add_common(sweep, sweep_opts, true);
  auto* avo = app.add_subcommand("act-vs-obs", "Action delay vs observation delay comparison");
  add_common(avo, avo_opts, true);
  auto* stoch = app.add_subcommand("stochastic", "Per-episode uniformly sampled lead times");
  add_common(stoch, stoch_opts, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed()) {
      drinv::OracleSuiteConfig oc;
      const std::string out = oracle_opts.out.empty() ? "runs/oracle" : oracle_opts.out;
      const auto cases = drinv::run_oracle_suite(oc);
      drinv::write_oracle_reports(cases, out, oc.min_visits);
      for (const auto& c : cases) drinv::write_report_text(std::cout, c.report, c.mdp);
      const bool ok = drinv::oracle_suite_passed(cases, oc);
      std::cout << (ok ? "oracle certification passed" : "oracle certification FAILED") << '\n';
      return ok ? kExitOk : kExitOracle;
    }
    if (train->parsed()) {
      const auto cfg = load(train_opts);
      const auto run = drinv::run_experiment(cfg);
      print_finals({drinv::final_performance(drinv::to_string(cfg.algorithm), cfg.delay.k, run.by_seed,
                                             cfg.final_fraction)});
      std::cout << "metrics written to " << run.dir.string() << '\n';
    } else if (sweep->parsed()) {
      const auto cfg = load(sweep_opts);
      print_finals(drinv::figure_delay_sweep(cfg, cfg.sweep_delays));
    } else if (avo->parsed()) {
      const auto cfg = load(avo_opts);
      const auto res = drinv::figure_act_vs_obs(cfg, cfg.act_vs_obs_delay);
      print_finals(res.rows);
      std::cout << "relative gap (drdqn action vs observation): " << res.relative_gap << '\n';
    } else if (stoch->parsed()) {
      const auto cfg = load(stoch_opts);
      const auto res = drinv::figure_stochastic(cfg, cfg.stochastic_k_max);
      std::cout << "seed  dqn_final_ma  drdqn_final_ma\n";
      for (std::size_t i = 0; i < res.seeds.size(); ++i)
        std::cout << res.seeds[i] << "  " << res.final_moving_average.at("dqn")[i] << "  "
                  << res.final_moving_average.at("drdqn")[i] << '\n';
    }
  } catch (const drinv::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const drinv::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const drinv::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
