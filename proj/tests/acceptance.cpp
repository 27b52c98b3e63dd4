// Acceptance gate. One PASS/FAIL line per criterion; every tolerance is pinned
// below. Usage: acceptance [--criterion N]   (no arguments: all criteria)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drinv/dqn.hpp"
#include "drinv/error.hpp"
#include "drinv/experiment.hpp"
#include "drinv/stats.hpp"

namespace fs = std::filesystem;
using namespace drinv;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream o;
  o.precision(precision);
  o << v;
  return o.str();
}

fs::path work_dir(const std::string& name) {
  const auto dir = fs::current_path() / "acceptance_runs" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

ExperimentConfig desk_config(const fs::path& out) {
  auto cfg = load_config(fs::path(DRINV_CONFIG_DIR) / "desk.json");
  cfg.output_dir = out;
  return cfg;
}

// 1. Tabular learning over information states against exact value iteration.
Verdict oracle_certification() {
  constexpr double kMaxSeconds = 60.0;
  const auto start = Clock::now();
  OracleSuiteConfig cfg;
  cfg.delays = {0, 1, 2};
  cfg.min_visits = 50;
  cfg.q_error_fraction = 0.05;
  const auto cases = run_oracle_suite(cfg);
  const double elapsed = seconds_since(start);
  bool ok = elapsed < kMaxSeconds;
  std::ostringstream d;
  for (const auto& c : cases) {
    const auto& r = c.report;
    const bool case_ok = r.passed() && r.suboptimal.empty() && r.states_checked == r.states_total &&
                         r.within_tolerance(cfg.q_error_fraction);
    ok = ok && case_ok;
    d << "k=" << c.delay << " checked " << r.states_checked << "/" << r.states_total << " mismatches "
      << r.mismatches.size() << " suboptimal " << r.suboptimal.size() << " ambiguous " << r.states_ambiguous << " max|Q-Q*| " << fmt(r.max_q_error)
      << " (limit " << fmt(cfg.q_error_fraction * r.value_span) << "); ";
  }
  d << fmt(elapsed, 3) << " s";
  return {ok, d.str()};
}

// 2. Zero delay: DQN and DRDQN are the same learner.
Verdict zero_delay_reduction() {
  constexpr double kMaxSeconds = 60.0;
  const auto start = Clock::now();
  auto base = desk_config("unused");
  base.train.episodes = 12;
  bool ok = true;
  std::ostringstream d;
  for (DelayMode mode : {DelayMode::action, DelayMode::observation}) {
    for (std::uint64_t seed : {0u, 1u}) {
      base.train.seed = seed;
      const auto setup = resolve(base);
      const DelayConfig delay{mode, DelayKind::constant, 0, 0};
      const auto a = train(setup.demand, setup.env, delay, base.train, Algorithm::dqn);
      const auto b = train(setup.demand, setup.env, delay, base.train, Algorithm::drdqn);
      bool same = a.episodes.size() == b.episodes.size() && a.net == b.net;
      for (std::size_t e = 0; same && e < a.episodes.size(); ++e)
        same = a.episodes[e].business_reward == b.episodes[e].business_reward;
      ok = ok && same;
      d << to_string(mode) << "/seed " << seed << (same ? " identical" : " DIFFER") << "; ";
    }
  }
  const double elapsed = seconds_since(start);
  d << fmt(elapsed, 3) << " s";
  return {ok && elapsed < kMaxSeconds, d.str()};
}

// 3. Stock conservation and non-negativity through the delayed environment.
Verdict conservation_fuzz() {
  constexpr long kSteps = 100000;
  constexpr double kMaxSeconds = 30.0;
  const auto start = Clock::now();
  Rng rng(2024);
  long steps = 0, violations = 0;
  std::uniform_int_distribution<int> n_products(1, 8), pick(0, kNumActions - 1), delay_pick(0, 6);
  std::uniform_real_distribution<double> fraction(0.05, 2.0);
  std::bernoulli_distribution observation(0.3);
  while (steps < kSteps) {
    const auto catalog = make_synthetic_catalog(n_products(rng), rng);
    EnvConfig env;
    env.constraints = default_constraints(catalog, fraction(rng));
    const int k = delay_pick(rng);
    const DelayConfig delay{observation(rng) ? DelayMode::observation : DelayMode::action,
                            DelayKind::constant, k, k};
    DelayedInventoryEnv sim(DemandSource(catalog), env, delay);
    for (int t = 0; t < 200 && steps < kSteps; ++t, ++steps) {
      const auto before = sim.state().on_hand();
      std::vector<int> decisions(catalog.size());
      for (auto& x : decisions) x = pick(rng);
      const auto r = sim.step(decisions, rng);
      const auto after = sim.state().on_hand();
      for (std::size_t i = 0; i < catalog.size(); ++i) {
        const auto& o = r.outcome[i];
        const bool good = after[i] == before[i] + o.arrived - o.sales - o.wastage && o.sales >= 0 &&
                          o.sales <= o.demand && o.sales + o.unmet == o.demand && o.wastage >= 0 &&
                          o.holding == after[i] && o.arrived >= 0;
        if (!good) ++violations;
        for (int units : sim.state().stock[i])
          if (units < 0) ++violations;
      }
      const auto& p = sim.pipeline();
      if (p.pushed_units() != p.popped_units() + p.in_flight_units()) ++violations;
    }
  }
  const double elapsed = seconds_since(start);
  return {violations == 0 && elapsed < kMaxSeconds,
          std::to_string(steps) + " steps, " + std::to_string(violations) + " violations, " +
              fmt(elapsed, 3) + " s"};
}

// 4. Capacity projection properties.
Verdict projection_properties() {
  constexpr int kInstances = 10000;
  constexpr double kMaxSeconds = 10.0;
  constexpr double kRelSlack = 1e-12;
  const auto start = Clock::now();
  Rng rng(99);
  std::uniform_int_distribution<int> n_products(1, 30), qty(0, 200);
  std::uniform_real_distribution<double> cap(0.01, 3.0);
  std::bernoulli_distribution zero(0.1);
  long bounds = 0, idempotent = 0, identity = 0, increase = 0;
  for (int n = 0; n < kInstances; ++n) {
    const auto catalog = make_synthetic_catalog(n_products(rng), rng);
    const auto c = default_constraints(catalog, cap(rng));
    std::vector<int> q(catalog.size());
    for (auto& x : q) x = zero(rng) ? 0 : qty(rng);
    const auto p = project_actions(q, catalog, c);
    double vol = 0.0, wt = 0.0, qvol = 0.0, qwt = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
      vol += catalog[i].unit_volume * p[i];
      wt += catalog[i].unit_weight * p[i];
      qvol += catalog[i].unit_volume * q[i];
      qwt += catalog[i].unit_weight * q[i];
      if (p[i] > q[i] || p[i] < 0) ++increase;
    }
    if (vol > c.max_volume * (1 + kRelSlack) || wt > c.max_weight * (1 + kRelSlack)) ++bounds;
    if (project_actions(p, catalog, c) != p) ++idempotent;
    if (qvol <= c.max_volume * (1 - kRelSlack) && qwt <= c.max_weight * (1 - kRelSlack) && p != q) ++identity;
  }
  const double elapsed = seconds_since(start);
  const bool ok = bounds + idempotent + identity + increase == 0 && elapsed < kMaxSeconds;
  return {ok, std::to_string(kInstances) + " instances; bound " + std::to_string(bounds) + ", idempotence " +
                  std::to_string(idempotent) + ", identity " + std::to_string(identity) + ", increase " +
                  std::to_string(increase) + " failures; " + fmt(elapsed, 3) + " s"};
}

// 5. Analytic TD gradients against central differences.
Verdict gradient_check() {
  constexpr int kPairs = 24;
  constexpr double kStep = 1e-5;
  constexpr double kMaxRelError = 1e-4;
  constexpr double kMaxSeconds = 30.0;
  const auto start = Clock::now();
  Rng rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> width(1, 12), batch_size(1, 16), depth(1, 3);
  double worst = 0.0;
  long checked = 0;
  for (int pair = 0; pair < kPairs; ++pair) {
    std::vector<int> sizes{width(rng)};
    for (int l = depth(rng); l > 0; --l) sizes.push_back(width(rng));
    sizes.push_back(std::max(2, width(rng)));
    auto net = QNetwork::initialized(sizes, rng);
    for (auto& layer : net.layers())
      for (Eigen::Index k = 0; k < layer.bias.size(); ++k) layer.bias[k] = 0.1 * u(rng);
    const int batch = batch_size(rng);
    Eigen::MatrixXd states = Eigen::MatrixXd::NullaryExpr(sizes.front(), batch, [&] { return u(rng); });
    std::vector<int> actions;
    std::vector<double> targets;
    for (int b = 0; b < batch; ++b) {
      actions.push_back(std::uniform_int_distribution<int>(0, sizes.back() - 1)(rng));
      targets.push_back(2.0 * u(rng));
    }
    const auto g = gradient(net, states, actions, targets);
    auto probe = [&](double& param, double analytic) {
      const double keep = param;
      param = keep + kStep;
      const double up = td_loss(net, states, actions, targets);
      param = keep - kStep;
      const double down = td_loss(net, states, actions, targets);
      param = keep;
      const double numeric = (up - down) / (2.0 * kStep);
      const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      worst = std::max(worst, rel);
      ++checked;
    };
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
      auto& layer = net.layers()[l];
      for (Eigen::Index k = 0; k < layer.weight.size(); ++k) probe(layer.weight.data()[k], g.layers[l].weight.data()[k]);
      for (Eigen::Index k = 0; k < layer.bias.size(); ++k) probe(layer.bias[k], g.layers[l].bias[k]);
    }
  }
  const double elapsed = seconds_since(start);
  return {worst <= kMaxRelError && elapsed < kMaxSeconds,
          std::to_string(kPairs) + " network/batch pairs, " + std::to_string(checked) +
              " parameters, max relative error " + fmt(worst, 3) + " (limit 1e-4), " + fmt(elapsed, 3) + " s"};
}

// 6. Lead time hurts plain DQN; the delay-resolved learner holds up at k = 10.
Verdict delay_degradation() {
  constexpr double kMaxSpearman = -0.8;
  constexpr int kMinWins = 8;
  constexpr double kMaxSeconds = 30.0 * 60.0;
  const auto start = Clock::now();
  const auto cfg = desk_config(work_dir("delay_sweep"));
  const std::vector<int> delays{1, 2, 5, 10};
  const auto rows = figure_delay_sweep(cfg, delays);
  std::map<std::pair<std::string, int>, const FinalRow*> by;
  for (const auto& r : rows) by[{r.label, r.delay}] = &r;
  std::vector<double> ds, dqn_means;
  std::ostringstream d;
  d << "DQN means";
  for (int k : delays) {
    ds.push_back(k);
    dqn_means.push_back(by.at({"dqn", k})->interval.mean);
    d << " k" << k << "=" << fmt(dqn_means.back());
  }
  const double rho = stats::spearman(ds, dqn_means);
  const auto& dqn10 = by.at({"dqn", 10})->finals;
  const auto& drdqn10 = by.at({"drdqn", 10})->finals;
  int wins = 0;
  for (std::size_t s = 0; s < dqn10.size(); ++s) wins += drdqn10[s] > dqn10[s];
  const double elapsed = seconds_since(start);
  d << "; spearman " << fmt(rho) << " (limit -0.8); DRDQN > DQN at k=10 in " << wins << "/" << dqn10.size()
    << " seeds (need 8); " << fmt(elapsed, 4) << " s";
  return {rho <= kMaxSpearman && wins >= kMinWins && dqn10.size() == 10 && elapsed < kMaxSeconds, d.str()};
}

// 7. Action delay and observation delay are interchangeable for DRDQN.
Verdict action_observation_equivalence() {
  constexpr double kMaxGap = 0.10;
  constexpr int kMinWins = 8;
  constexpr double kMaxSeconds = 15.0 * 60.0;
  const auto start = Clock::now();
  const auto cfg = desk_config(work_dir("act_vs_obs"));
  const auto res = figure_act_vs_obs(cfg, 5);
  std::map<std::string, const FinalRow*> by;
  for (const auto& r : res.rows) by[r.label] = &r;
  const auto& act = by.at("drdqn/action")->finals;
  const auto& obs = by.at("drdqn/observation")->finals;
  const auto& dqn = by.at("dqn/action")->finals;
  int act_wins = 0, obs_wins = 0;
  for (std::size_t s = 0; s < dqn.size(); ++s) {
    act_wins += act[s] > dqn[s];
    obs_wins += obs[s] > dqn[s];
  }
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "DRDQN action " << fmt(by.at("drdqn/action")->interval.mean) << " vs observation "
    << fmt(by.at("drdqn/observation")->interval.mean) << ", relative gap " << fmt(res.relative_gap, 3)
    << " (limit 0.10); beat DQN in " << act_wins << " and " << obs_wins << " of " << dqn.size()
    << " seeds (need 8); DQN observation mean " << fmt(by.at("dqn/observation")->interval.mean) << "; "
    << fmt(elapsed, 4) << " s";
  const bool ok = res.relative_gap <= kMaxGap && act_wins >= kMinWins && obs_wins >= kMinWins &&
                  dqn.size() == 10 && elapsed < kMaxSeconds;
  return {ok, d.str()};
}

// 8. Per-episode random lead times.
Verdict stochastic_delays() {
  constexpr int kMinWins = 8;
  constexpr double kMinPValue = 0.01;
  constexpr int kMaxDelay = 10;
  constexpr double kMaxSeconds = 30.0 * 60.0;
  const auto start = Clock::now();
  const auto cfg = desk_config(work_dir("stochastic"));
  const auto res = figure_stochastic(cfg, kMaxDelay);
  const auto& dqn = res.final_moving_average.at("dqn");
  const auto& drdqn = res.final_moving_average.at("drdqn");
  int wins = 0;
  for (std::size_t s = 0; s < dqn.size(); ++s) wins += drdqn[s] >= dqn[s];
  std::vector<long> counts(kMaxDelay, 0);
  bool in_range = true;
  // Both learners replay the same per-seed delay stream, so one run holds every independent draw.
  for (const auto& [seed, rows] : res.runs.at("drdqn").by_seed)
    for (const auto& row : rows) {
      if (row.delay < 1 || row.delay > kMaxDelay) in_range = false;
      else ++counts[static_cast<std::size_t>(row.delay - 1)];
    }
  const auto chi = stats::chi_square_uniform(counts);
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "DRDQN final moving average >= DQN in " << wins << "/" << dqn.size() << " seeds (need 8); delay chi2 "
    << fmt(chi.statistic) << " p=" << fmt(chi.p_value, 3) << " (need > 0.01)" << (in_range ? "" : ", delay out of range")
    << "; " << fmt(elapsed, 4) << " s";
  const bool ok = wins >= kMinWins && dqn.size() == 10 && chi.p_value > kMinPValue && in_range &&
                  elapsed < kMaxSeconds;
  return {ok, d.str()};
}

std::string strip_wall_ms(const fs::path& csv) {
  std::ifstream in(csv);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

// 9. Reproducibility and lossless persistence.
Verdict determinism_round_trips() {
  constexpr double kMaxSeconds = 60.0;
  const auto start = Clock::now();
  auto cfg = desk_config(work_dir("determinism_a"));
  cfg.train.episodes = 8;
  cfg.seeds = {0, 1, 2};
  cfg.delay = {DelayMode::action, DelayKind::stochastic, 0, 6};
  const auto cfg_a = cfg;
  const auto a = run_experiment(cfg);
  cfg.output_dir = work_dir("determinism_b");
  cfg.jobs = 3;
  const auto b = run_experiment(cfg);

  bool metrics = true, checkpoints = true;
  for (auto seed : cfg.seeds) {
    const auto name = "seed_" + std::to_string(seed);
    metrics = metrics && strip_wall_ms(a.dir / (name + ".csv")) == strip_wall_ms(b.dir / (name + ".csv"));
    const auto loaded = QNetwork::load(a.dir / (name + ".qnet"));
    checkpoints = checkpoints && loaded == a.nets.at(seed) && slurp(a.dir / (name + ".qnet")) == slurp(b.dir / (name + ".qnet"));
  }
  const auto text = serialize_config(cfg_a);
  const bool config = parse_config(text) == cfg_a && serialize_config(parse_config(text)) == text &&
                      load_config(a.dir / "config.json") == cfg_a;
  const double elapsed = seconds_since(start);
  std::ostringstream d;
  d << "metrics " << (metrics ? "identical" : "DIFFER") << ", checkpoints " << (checkpoints ? "bit-exact" : "DIFFER")
    << ", config " << (config ? "round-trips" : "DIFFERS") << "; " << fmt(elapsed, 3) << " s";
  return {metrics && checkpoints && config && elapsed < kMaxSeconds, d.str()};
}

const std::vector<std::pair<std::string, std::function<Verdict()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Verdict()>>> list{
      {"oracle certification", oracle_certification},
      {"zero-delay reduction", zero_delay_reduction},
      {"conservation fuzz", conservation_fuzz},
      {"projection properties", projection_properties},
      {"gradient check", gradient_check},
      {"delay degradation ordering", delay_degradation},
      {"action/observation equivalence", action_observation_equivalence},
      {"stochastic delays", stochastic_delays},
      {"determinism and round-trips", determinism_round_trips},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (int n = 1; n <= static_cast<int>(criteria().size()); ++n) selected.push_back(n);

  int failures = 0;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria().size())) {
      std::cerr << "no criterion " << n << '\n';
      return 2;
    }
    const auto& [name, check] = criteria()[static_cast<std::size_t>(n - 1)];
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << n << " [" << name << "]: " << (v.pass ? "PASS" : "FAIL") << " - " << v.detail
              << std::endl;
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
