#include "drinv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <set>
#include <sstream>

#include <json.hpp>

#include "drinv/error.hpp"

namespace drinv {
namespace {

using nlohmann::json;

// Typed reader over one JSON object that rejects unknown keys.
class Reader {
 public:
  Reader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + ": expected an object");
  }
  ~Reader() noexcept(false) {
    if (std::uncaught_exceptions()) return;
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& sub(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

std::string optimizer_name(OptimizerKind k) { return k == OptimizerKind::sgd ? "sgd" : "adam"; }

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "sgd") return OptimizerKind::sgd;
  if (s == "adam") return OptimizerKind::adam;
  throw ConfigError("unknown optimizer '" + s + "'");
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  json cat;
  if (c.catalog.path.empty()) {
    cat["products"] = c.catalog.products;
    cat["seed"] = c.catalog.seed;
  } else {
    cat["path"] = c.catalog.path.string();
    if (!c.catalog.demand_path.empty()) cat["demand_path"] = c.catalog.demand_path.string();
  }
  j["catalog"] = cat;
  json con;
  con["fraction"] = c.constraints.fraction;
  if (c.constraints.max_volume) con["max_volume"] = *c.constraints.max_volume;
  if (c.constraints.max_weight) con["max_weight"] = *c.constraints.max_weight;
  j["constraints"] = con;
  j["reward"] = {{"sale_coeff", c.reward.sale_coeff},
                 {"holding_coeff", c.reward.holding_coeff},
                 {"wastage_coeff", c.reward.wastage_coeff},
                 {"stockout_coeff", c.reward.stockout_coeff}};
  j["initial_cover"] = c.initial_cover;
  j["algorithm"] = to_string(c.algorithm);
  j["delay"] = {{"mode", to_string(c.delay.mode)},
                {"kind", to_string(c.delay.kind)},
                {"k", c.delay.k},
                {"k_max", c.delay.k_max}};
  const auto& t = c.train;
  j["train"] = {{"gamma", t.gamma},
                {"optimizer", optimizer_name(t.optimizer.kind)},
                {"learning_rate", t.optimizer.learning_rate},
                {"max_grad_norm", t.optimizer.max_grad_norm},
                {"batch_size", t.batch_size},
                {"replay_capacity", t.replay_capacity},
                {"target_sync_interval", t.target_sync_interval},
                {"epsilon_start", t.epsilon.start},
                {"epsilon_end", t.epsilon.end},
                {"epsilon_decay_steps", t.epsilon.decay_steps},
                {"horizon", t.horizon},
                {"episodes", t.episodes},
                {"hidden", t.hidden},
                {"updates_per_step", t.updates_per_step},
                {"warmup", t.warmup},
                {"terminal_at_horizon", t.terminal_at_horizon}};
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir.string();
  j["jobs"] = c.jobs;
  j["sweep_delays"] = c.sweep_delays;
  j["act_vs_obs_delay"] = c.act_vs_obs_delay;
  j["stochastic_k_max"] = c.stochastic_k_max;
  j["moving_average_window"] = c.moving_average_window;
  j["final_fraction"] = c.final_fraction;
  return j;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  Reader r(j, "config");
  r.get("name", c.name);
  if (r.has("catalog")) {
    Reader cat(r.sub("catalog"), r.path("catalog"));
    cat.get("products", c.catalog.products);
    cat.get("seed", c.catalog.seed);
    std::string path, demand;
    cat.get("path", path);
    cat.get("demand_path", demand);
    c.catalog.path = path;
    c.catalog.demand_path = demand;
  }
  if (r.has("constraints")) {
    Reader con(r.sub("constraints"), r.path("constraints"));
    con.get("fraction", c.constraints.fraction);
    double v = 0.0;
    if (con.has("max_volume")) {
      con.get("max_volume", v);
      c.constraints.max_volume = v;
    }
    if (con.has("max_weight")) {
      con.get("max_weight", v);
      c.constraints.max_weight = v;
    }
  }
  if (r.has("reward")) {
    Reader rw(r.sub("reward"), r.path("reward"));
    rw.get("sale_coeff", c.reward.sale_coeff);
    rw.get("holding_coeff", c.reward.holding_coeff);
    rw.get("wastage_coeff", c.reward.wastage_coeff);
    rw.get("stockout_coeff", c.reward.stockout_coeff);
  }
  r.get("initial_cover", c.initial_cover);
  std::string algorithm = to_string(c.algorithm);
  r.get("algorithm", algorithm);
  c.algorithm = parse_algorithm(algorithm);
  if (r.has("delay")) {
    Reader d(r.sub("delay"), r.path("delay"));
    std::string mode = to_string(c.delay.mode), kind = to_string(c.delay.kind);
    d.get("mode", mode);
    d.get("kind", kind);
    c.delay.mode = parse_delay_mode(mode);
    c.delay.kind = parse_delay_kind(kind);
    d.get("k", c.delay.k);
    d.get("k_max", c.delay.k_max);
  }
  if (r.has("train")) {
    Reader t(r.sub("train"), r.path("train"));
    auto& tc = c.train;
    t.get("gamma", tc.gamma);
    std::string opt = optimizer_name(tc.optimizer.kind);
    t.get("optimizer", opt);
    tc.optimizer.kind = parse_optimizer(opt);
    t.get("learning_rate", tc.optimizer.learning_rate);
    t.get("max_grad_norm", tc.optimizer.max_grad_norm);
    t.get("batch_size", tc.batch_size);
    t.get("replay_capacity", tc.replay_capacity);
    t.get("target_sync_interval", tc.target_sync_interval);
    t.get("epsilon_start", tc.epsilon.start);
    t.get("epsilon_end", tc.epsilon.end);
    t.get("epsilon_decay_steps", tc.epsilon.decay_steps);
    t.get("horizon", tc.horizon);
    t.get("episodes", tc.episodes);
    t.get("hidden", tc.hidden);
    t.get("updates_per_step", tc.updates_per_step);
    t.get("warmup", tc.warmup);
    t.get("terminal_at_horizon", tc.terminal_at_horizon);
  }
  r.get("seeds", c.seeds);
  std::string out = c.output_dir.string();
  r.get("output_dir", out);
  c.output_dir = out;
  r.get("jobs", c.jobs);
  r.get("sweep_delays", c.sweep_delays);
  r.get("act_vs_obs_delay", c.act_vs_obs_delay);
  r.get("stochastic_k_max", c.stochastic_k_max);
  r.get("moving_average_window", c.moving_average_window);
  r.get("final_fraction", c.final_fraction);
  return c;
}

void ensure_writable_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ConfigError(dir.string() + ": cannot create output directory");
  const auto probe = dir / ".write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError(dir.string() + ": output directory is not writable");
  }
  std::filesystem::remove(probe, ec);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (seeds.empty()) throw ConfigError("config: seeds must be non-empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("config: seeds must be distinct");
  if (catalog.path.empty()) {
    if (catalog.products < 1) throw ConfigError("config: catalog.products must be >= 1");
  } else if (!std::filesystem::exists(catalog.path)) {
    throw ConfigError("config: catalog file '" + catalog.path.string() + "' does not exist");
  }
  if (!catalog.demand_path.empty()) {
    if (catalog.path.empty()) throw ConfigError("config: demand_path requires a catalog path");
    if (!std::filesystem::exists(catalog.demand_path))
      throw ConfigError("config: demand file '" + catalog.demand_path.string() + "' does not exist");
  }
  if (!(constraints.fraction > 0.0)) throw ConfigError("config: constraints.fraction must be > 0");
  if (constraints.max_volume && !(*constraints.max_volume > 0.0))
    throw ConfigError("config: constraints.max_volume must be > 0");
  if (constraints.max_weight && !(*constraints.max_weight > 0.0))
    throw ConfigError("config: constraints.max_weight must be > 0");
  for (double v : {reward.sale_coeff, reward.holding_coeff, reward.wastage_coeff, reward.stockout_coeff})
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("config: reward coefficients must be finite and >= 0");
  if (!(initial_cover >= 0.0)) throw ConfigError("config: initial_cover must be >= 0");
  if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
  if (moving_average_window < 1) throw ConfigError("config: moving_average_window must be >= 1");
  if (!(final_fraction > 0.0 && final_fraction <= 1.0))
    throw ConfigError("config: final_fraction must be in (0,1]");
  std::set<int> distinct(sweep_delays.begin(), sweep_delays.end());
  if (distinct.size() != sweep_delays.size() || (!sweep_delays.empty() && *distinct.begin() < 0))
    throw ConfigError("config: sweep_delays must be distinct non-negative integers");
  try {
    delay.validate();
    train.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return from_json(j);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::string apply_overrides(const std::string& json_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  for (const auto& [key, text] : overrides) {
    if (key.empty()) throw ConfigError("override: empty key");
    json value;
    try {
      value = json::parse(text);
    } catch (const json::parse_error&) {
      value = text;
    }
    std::string pointer;
    std::stringstream ks(key);
    for (std::string part; std::getline(ks, part, '.');) {
      if (part.empty()) throw ConfigError("override: malformed key '" + key + "'");
      pointer += "/" + part;
    }
    j[json::json_pointer(pointer)] = value;
  }
  return j.dump();
}

ResolvedSetup resolve(const ExperimentConfig& cfg) {
  Catalog catalog;
  DemandSeries series;
  if (cfg.catalog.path.empty()) {
    Rng rng = make_stream(cfg.catalog.seed, Stream::catalog);
    catalog = make_synthetic_catalog(cfg.catalog.products, rng);
  } else {
    catalog = load_catalog(cfg.catalog.path);
    if (!cfg.catalog.demand_path.empty()) series = load_demand_series(cfg.catalog.demand_path);
  }
  EnvConfig env;
  env.constraints = default_constraints(catalog, cfg.constraints.fraction);
  if (cfg.constraints.max_volume) env.constraints.max_volume = *cfg.constraints.max_volume;
  if (cfg.constraints.max_weight) env.constraints.max_weight = *cfg.constraints.max_weight;
  env.reward = cfg.reward;
  env.initial_cover = cfg.initial_cover;
  if (series.demand.empty()) return {DemandSource(std::move(catalog)), env};
  return {DemandSource(std::move(catalog), std::move(series)), env};
}

const char* const kMetricsHeader =
    "run_id,seed,episode,delay,business_reward,sales,wastage,unmet,holding,epsilon,wall_ms";

void write_metrics_row(std::ostream& out, const MetricsRow& r) {
  out << r.run_id << ',' << r.seed << ',' << r.episode << ',' << r.delay << ',' << fmt(r.business_reward)
      << ',' << r.sales << ',' << r.wastage << ',' << r.unmet << ',' << r.holding << ',' << fmt(r.epsilon)
      << ',' << std::fixed << std::setprecision(3) << r.wall_ms << std::defaultfloat << '\n';
}

std::vector<MetricsRow> load_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open metrics");
  std::string line;
  if (!std::getline(in, line) || line != kMetricsHeader) throw ParseError(path.string() + ": bad metrics header");
  std::vector<MetricsRow> rows;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string part; std::getline(ss, part, ',');) f.push_back(part);
    if (f.size() != 11) throw ParseError(path.string() + ": row " + std::to_string(n) + ": expected 11 fields");
    try {
      MetricsRow r;
      r.run_id = f[0];
      r.seed = std::stoull(f[1]);
      r.episode = std::stoi(f[2]);
      r.delay = std::stoi(f[3]);
      r.business_reward = std::stod(f[4]);
      r.sales = std::stoll(f[5]);
      r.wastage = std::stoll(f[6]);
      r.unmet = std::stoll(f[7]);
      r.holding = std::stoll(f[8]);
      r.epsilon = std::stod(f[9]);
      r.wall_ms = std::stod(f[10]);
      rows.push_back(std::move(r));
    } catch (const std::exception&) {
      throw ParseError(path.string() + ": row " + std::to_string(n) + ": malformed field");
    }
  }
  return rows;
}

std::vector<double> RunResult::rewards(std::uint64_t seed) const {
  std::vector<double> out;
  for (const auto& r : by_seed.at(seed)) out.push_back(r.business_reward);
  return out;
}

std::string run_id_for(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << cfg.name << '-' << to_string(cfg.algorithm) << '-' << to_string(cfg.delay.mode) << '-';
  if (cfg.delay.kind == DelayKind::constant)
    os << 'k' << cfg.delay.k;
  else
    os << "kmax" << cfg.delay.k_max;
  return os.str();
}

std::vector<SummaryRow> summarize(const std::map<std::uint64_t, std::vector<MetricsRow>>& by_seed) {
  std::map<int, std::vector<double>> per_episode;
  for (const auto& [seed, rows] : by_seed)
    for (const auto& r : rows) per_episode[r.episode].push_back(r.business_reward);
  std::vector<SummaryRow> out;
  for (const auto& [episode, values] : per_episode) out.push_back({episode, stats::confidence95(values)});
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  RunResult result;
  result.run_id = run_id_for(cfg);
  result.dir = cfg.output_dir / result.run_id;
  ensure_writable_dir(result.dir);
  const auto setup = resolve(cfg);
  {
    std::ofstream out(result.dir / "config.json");
    out << serialize_config(cfg) << '\n';
  }

  auto run_seed = [&](std::uint64_t seed) {
    TrainConfig tc = cfg.train;
    tc.seed = seed;
    std::ofstream out(result.dir / ("seed_" + std::to_string(seed) + ".csv"));
    if (!out) throw ConfigError((result.dir / ("seed_" + std::to_string(seed) + ".csv")).string() + ": cannot write");
    out << kMetricsHeader << '\n';
    std::vector<MetricsRow> rows;
    auto trained = train(setup.demand, setup.env, cfg.delay, tc, cfg.algorithm, [&](const EpisodeStats& s) {
      MetricsRow row{result.run_id, seed, s.episode, s.delay, s.business_reward, s.sales,
                     s.wastage,     s.unmet, s.holding, s.epsilon, s.wall_ms};
      write_metrics_row(out, row);
      out.flush();
      rows.push_back(std::move(row));
    });
    trained.net.save(result.dir / ("seed_" + std::to_string(seed) + ".qnet"));
    return std::make_pair(std::move(rows), std::move(trained.net));
  };

  for (std::size_t start = 0; start < cfg.seeds.size(); start += static_cast<std::size_t>(cfg.jobs)) {
    const auto stop = std::min(cfg.seeds.size(), start + static_cast<std::size_t>(cfg.jobs));
    std::vector<std::future<std::pair<std::vector<MetricsRow>, QNetwork>>> pending;
    for (std::size_t i = start; i < stop; ++i)
      pending.push_back(std::async(cfg.jobs > 1 ? std::launch::async : std::launch::deferred, run_seed,
                                   cfg.seeds[i]));
    for (std::size_t i = start; i < stop; ++i) {
      auto [rows, net] = pending[i - start].get();
      result.by_seed[cfg.seeds[i]] = std::move(rows);
      result.nets[cfg.seeds[i]] = std::move(net);
    }
  }

  std::ofstream summary(result.dir / "summary.csv");
  summary << "episode,n,mean,ci_low,ci_high\n";
  for (const auto& row : summarize(result.by_seed))
    summary << row.episode << ',' << row.interval.n << ',' << fmt(row.interval.mean) << ','
            << fmt(row.interval.low) << ',' << fmt(row.interval.high) << '\n';
  return result;
}

FinalRow final_performance(const std::string& label, int delay,
                           const std::map<std::uint64_t, std::vector<MetricsRow>>& by_seed,
                           double fraction) {
  FinalRow row;
  row.label = label;
  row.delay = delay;
  for (const auto& [seed, rows] : by_seed) {
    std::vector<double> series;
    for (const auto& r : rows) series.push_back(r.business_reward);
    row.seeds.push_back(seed);
    row.finals.push_back(stats::tail_mean(series, fraction));
  }
  row.interval = stats::confidence95(row.finals);
  return row;
}

namespace {

void write_final_tables(const std::vector<FinalRow>& rows, const std::filesystem::path& table,
                        const std::filesystem::path& per_seed) {
  std::ofstream t(table);
  t << "algorithm,delay,n,mean_final,ci_low,ci_high\n";
  for (const auto& r : rows)
    t << r.label << ',' << r.delay << ',' << r.interval.n << ',' << fmt(r.interval.mean) << ','
      << fmt(r.interval.low) << ',' << fmt(r.interval.high) << '\n';
  std::ofstream s(per_seed);
  s << "algorithm,delay,seed,final\n";
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.seeds.size(); ++i)
      s << r.label << ',' << r.delay << ',' << r.seeds[i] << ',' << fmt(r.finals[i]) << '\n';
}

}  // namespace

std::vector<FinalRow> figure_delay_sweep(const ExperimentConfig& cfg, const std::vector<int>& delays) {
  std::set<int> distinct(delays.begin(), delays.end());
  if (distinct.size() != delays.size() || (!delays.empty() && *distinct.begin() < 0))
    throw ConfigError("sweep-delay: delays must be distinct non-negative integers");
  cfg.validate();
  ensure_writable_dir(cfg.output_dir);
  std::vector<FinalRow> rows;
  for (int d : delays) {
    for (Algorithm a : {Algorithm::dqn, Algorithm::drdqn}) {
      ExperimentConfig c = cfg;
      c.algorithm = a;
      c.delay = {DelayMode::action, DelayKind::constant, d, d};
      const auto run = run_experiment(c);
      rows.push_back(final_performance(to_string(a), d, run.by_seed, cfg.final_fraction));
    }
  }
  write_final_tables(rows, cfg.output_dir / "sweep_delay.csv", cfg.output_dir / "sweep_delay_seeds.csv");
  return rows;
}

ActVsObsResult figure_act_vs_obs(const ExperimentConfig& cfg, int delay) {
  if (delay < 0) throw ConfigError("act-vs-obs: delay must be >= 0");
  cfg.validate();
  ensure_writable_dir(cfg.output_dir);
  ActVsObsResult result;
  for (Algorithm a : {Algorithm::drdqn, Algorithm::dqn}) {
    for (DelayMode m : {DelayMode::action, DelayMode::observation}) {
      ExperimentConfig c = cfg;
      c.algorithm = a;
      c.delay = {m, DelayKind::constant, delay, delay};
      const auto run = run_experiment(c);
      result.rows.push_back(
          final_performance(to_string(a) + "/" + to_string(m), delay, run.by_seed, cfg.final_fraction));
    }
  }
  const double act = result.rows[0].interval.mean, obs = result.rows[1].interval.mean;
  const double scale = std::max(std::abs(act), std::abs(obs));
  result.relative_gap = scale == 0.0 ? 0.0 : std::abs(act - obs) / scale;
  write_final_tables(result.rows, cfg.output_dir / "act_vs_obs.csv", cfg.output_dir / "act_vs_obs_seeds.csv");
  std::ofstream gap(cfg.output_dir / "act_vs_obs_gap.csv");
  gap << "delay,drdqn_action,drdqn_observation,relative_gap\n"
      << delay << ',' << fmt(act) << ',' << fmt(obs) << ',' << fmt(result.relative_gap) << '\n';
  return result;
}

StochasticResult figure_stochastic(const ExperimentConfig& cfg, int k_max) {
  if (k_max < 1) throw ConfigError("stochastic: k_max must be >= 1");
  cfg.validate();
  ensure_writable_dir(cfg.output_dir);
  StochasticResult result;
  result.seeds = cfg.seeds;
  const auto window = static_cast<std::size_t>(cfg.moving_average_window);
  std::ofstream curves(cfg.output_dir / "stochastic_curves.csv");
  curves << "algorithm,seed,episode,delay,business_reward,moving_average\n";
  for (Algorithm a : {Algorithm::dqn, Algorithm::drdqn}) {
    ExperimentConfig c = cfg;
    c.algorithm = a;
    c.delay = {DelayMode::action, DelayKind::stochastic, 0, k_max};
    auto run = run_experiment(c);
    const auto label = to_string(a);
    for (auto seed : cfg.seeds) {
      const auto series = run.rewards(seed);
      const auto ma = stats::moving_average(series, window);
      const auto& rows = run.by_seed.at(seed);
      for (std::size_t e = 0; e < series.size(); ++e)
        curves << label << ',' << seed << ',' << rows[e].episode << ',' << rows[e].delay << ','
               << fmt(series[e]) << ',' << fmt(ma[e]) << '\n';
      const std::size_t tail = std::min<std::size_t>(50, ma.size());
      result.final_moving_average[label].push_back(
          stats::mean(std::span<const double>(ma).subspan(ma.size() - tail)));
    }
    result.runs.emplace(label, std::move(run));
  }
  std::ofstream fin(cfg.output_dir / "stochastic_final.csv");
  fin << "seed,dqn_final_ma,drdqn_final_ma\n";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    fin << cfg.seeds[i] << ',' << fmt(result.final_moving_average["dqn"][i]) << ','
        << fmt(result.final_moving_average["drdqn"][i]) << '\n';
  return result;
}

std::vector<OracleCase> run_oracle_suite(const OracleSuiteConfig& cfg) {
  const ExplicitMDP base = tiny_inventory_mdp();
  std::vector<OracleCase> cases;
  for (int k : cfg.delays) {
    OracleCase c;
    c.delay = k;
    c.mdp = enumerate_augmented(base, k);
    c.exact = value_iteration(c.mdp.mdp, base.gamma, cfg.value_tolerance);
    DiscreteDelayedEnv env(base, k);
    Rng rng = make_stream(cfg.seed + static_cast<std::uint64_t>(k), Stream::explore);
    TabularConfig tc = cfg.tabular;
    tc.gamma = base.gamma;
    c.learned = tabular_q_learning(env, tc, rng);
    c.report = certify(c.learned.table, c.exact, c.learned.state_visits, cfg.min_visits);
    c.report.delay = k;
    cases.push_back(std::move(c));
  }
  return cases;
}

bool oracle_suite_passed(const std::vector<OracleCase>& cases, const OracleSuiteConfig& cfg) {
  return std::all_of(cases.begin(), cases.end(), [&](const OracleCase& c) {
    return c.report.passed() && c.report.suboptimal.empty() &&
           c.report.within_tolerance(cfg.q_error_fraction);
  });
}

void write_oracle_reports(const std::vector<OracleCase>& cases, const std::filesystem::path& dir,
                          long min_visits) {
  ensure_writable_dir(dir);
  std::ofstream text(dir / "oracle_report.txt");
  std::ofstream csv(dir / "oracle_report.csv");
  bool header = true;
  for (const auto& c : cases) {
    write_report_text(text, c.report, c.mdp);
    std::ostringstream part;
    write_report_csv(part, c.report, c.mdp, c.learned.table, c.exact, c.learned.state_visits, min_visits);
    std::string body = part.str();
    if (!header) body = body.substr(body.find('\n') + 1);
    csv << body;
    header = false;
  }
}

}  // namespace drinv
