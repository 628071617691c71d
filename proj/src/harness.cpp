#include "dgd/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "dgd/check.hpp"
#include "dgd/coordination.hpp"
#include "dgd/soccer.hpp"

namespace dgd {
namespace {

bool is_soccer(const std::string& scenario) {
  return scenario.rfind("soccer", 0) == 0;
}

SoccerConfig soccer_config(const ExperimentConfig& config) {
  SoccerConfig sc;
  sc.no_pass = config.no_pass;
  if (config.scenario == "soccer-random")
    sc.opponents = {OpponentKind::random};
  else if (config.scenario == "soccer-greedy")
    sc.opponents = {OpponentKind::greedy};
  else if (config.scenario == "soccer-defensive")
    sc.opponents = {OpponentKind::defensive};
  else if (config.scenario == "soccer-2v2")
    sc.opponents = {OpponentKind::greedy, OpponentKind::defensive};
  else
    throw ConfigError("unknown scenario: " + config.scenario);
  return sc;
}

LearningCurve run_one(const ExperimentConfig& config,
                      const GameDynamics& dynamics, std::uint64_t run,
                      QTable* q_table_out) {
  RunRng rng(config.seed, run);
  if (config.algo == Algo::q_central) {
    QTable table(joint_action_count(dynamics));
    QConfig qc;
    qc.alpha = config.alpha;
    qc.gamma = config.gamma;
    qc.epsilon = config.epsilon;
    qc.trials = config.trials;
    qc.eval_every = config.eval_every;
    qc.eval_episodes = config.eval_episodes;
    qc.max_steps = config.max_steps;
    LearningCurve curve = q_train(dynamics, config.observability, table, qc, rng);
    if (q_table_out != nullptr) *q_table_out = std::move(table);
    return curve;
  }

  auto policies = make_policies(config, dynamics);
  std::vector<Policy*> raw;
  for (auto& p : policies) {
    init_policy_params(*p, static_cast<int>(raw.size()), rng,
                       config.init_range);
    raw.push_back(p.get());
  }
  TrainerConfig tc;
  tc.alpha = config.alpha;
  tc.gamma = config.gamma;
  tc.trials = config.trials;
  tc.eval_every = config.eval_every;
  tc.eval_episodes = config.eval_episodes;
  tc.max_steps = config.max_steps;
  tc.sum_bound = config.sum_bound;
  return config.algo == Algo::dgd ? dgd_train(dynamics, raw, tc, rng)
                                  : joint_train(dynamics, raw, tc, rng);
}

}  // namespace

void resolve_defaults(ExperimentConfig& config) {
  const bool soccer = is_soccer(config.scenario);
  if (config.gamma < 0.0) config.gamma = soccer ? 0.999 : 0.99;
  if (config.alpha < 0.0) {
    if (config.algo == Algo::q_central)
      config.alpha = 0.1;
    else
      config.alpha = soccer ? 0.05 : 0.003;
  }
  if (config.trials < 0) config.trials = soccer ? 200000 : 50000;
  if (config.eval_every < 0) config.eval_every = soccer ? 2000 : 500;
  if (config.eval_episodes < 0) config.eval_episodes = soccer ? 100 : 200;
  if (config.max_steps < 0) config.max_steps = soccer ? 1000 : 2;
}

void validate_config(const ExperimentConfig& config) {
  if (config.scenario != "coordination" && !is_soccer(config.scenario))
    throw ConfigError("unknown scenario: " + config.scenario);
  if (is_soccer(config.scenario)) soccer_config(config);  // validates name
  if (config.runs < 1) throw ConfigError("runs must be at least 1");
  if (config.trials < 1) throw ConfigError("trials must be at least 1");
  if (config.alpha <= 0.0) throw ConfigError("alpha must be positive");
  if (config.gamma < 0.0 || config.gamma >= 1.0)
    throw ConfigError("gamma must be in [0,1)");
  if (config.epsilon < 0.0 || config.epsilon > 1.0)
    throw ConfigError("epsilon must be in [0,1]");
  if (config.fsc_states < 1)
    throw ConfigError("fsc-states must be at least 1");
  if (config.max_steps < 1) throw ConfigError("max-steps must be at least 1");
  if (config.no_pass && !is_soccer(config.scenario))
    throw ConfigError("--no-pass only applies to soccer scenarios");
  if (config.algo != Algo::q_central && config.observability_set &&
      config.observability == Observability::full)
    throw ConfigError(
        "full observability requires the central q-learning controller");
  if (config.algo == Algo::q_central && config.fsc_states != 1)
    throw ConfigError("fsc-states does not apply to q-central");
}

std::unique_ptr<GameDynamics> make_scenario(const ExperimentConfig& config) {
  if (config.scenario == "coordination")
    return std::make_unique<CoordinationGame>();
  return std::make_unique<SoccerWorld>(soccer_config(config));
}

std::vector<std::unique_ptr<Policy>> make_policies(
    const ExperimentConfig& config, const GameDynamics& dynamics) {
  std::vector<std::unique_ptr<Policy>> out;
  for (int i = 0; i < dynamics.agent_count(); ++i) {
    const AgentSpec& spec = dynamics.agent_spec(i);
    if (config.fsc_states == 1)
      out.push_back(std::make_unique<SoftmaxReactivePolicy>(
          spec.observation_count, spec.action_count, config.theta));
    else
      out.push_back(std::make_unique<FiniteStateController>(
          config.fsc_states, spec.observation_count, spec.action_count,
          config.theta));
  }
  return out;
}

void init_policy_params(Policy& policy, int agent, const RunRng& rng,
                        double range) {
  auto stream = rng.stream(0, 0, 0, static_cast<std::uint16_t>(agent),
                           Purpose::param_init);
  std::vector<double> params(policy.param_count());
  for (double& w : params) w = (stream.uniform() * 2.0 - 1.0) * range;
  policy.set_params(params);
}

CurveSet aggregate_curves(std::span<const LearningCurve> curves) {
  DGD_CHECK(!curves.empty(), "no curves to aggregate");
  const std::size_t points = curves[0].size();
  CurveSet out;
  out.runs = static_cast<long>(curves.size());
  out.trials.resize(points);
  out.mean.assign(points, 0.0);
  out.stddev.assign(points, 0.0);
  for (std::size_t k = 0; k < points; ++k)
    out.trials[k] = curves[0][k].trial;
  for (const auto& curve : curves)
    DGD_CHECK(curve.size() == points, "curves disagree on checkpoints");

  for (std::size_t k = 0; k < points; ++k) {
    // Welford across runs
    double mean = 0.0, m2 = 0.0;
    long n = 0;
    for (const auto& curve : curves) {
      DGD_CHECK(curve[k].trial == out.trials[k],
                "curves disagree on checkpoints");
      ++n;
      const double delta = curve[k].mean_payoff - mean;
      mean += delta / static_cast<double>(n);
      m2 += delta * (curve[k].mean_payoff - mean);
    }
    out.mean[k] = mean;
    out.stddev[k] = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
  }
  return out;
}

std::vector<LearningCurve> run_experiment_curves(const ExperimentConfig& config,
                                                 QTable* q_table_out) {
  validate_config(config);
  auto dynamics = make_scenario(config);
  std::vector<LearningCurve> curves(config.runs);

  long workers = config.threads > 0
                     ? config.threads
                     : static_cast<long>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, config.runs);

  if (workers == 1) {
    for (long r = 0; r < config.runs; ++r)
      curves[r] = run_one(config, *dynamics, r, r == 0 ? q_table_out : nullptr);
  } else {
    std::atomic<long> next{0};
    auto work = [&]() {
      for (;;) {
        const long r = next.fetch_add(1);
        if (r >= config.runs) return;
        curves[r] =
            run_one(config, *dynamics, r, r == 0 ? q_table_out : nullptr);
      }
    };
    std::vector<std::thread> pool;
    for (long w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return curves;
}

CurveSet run_experiment(const ExperimentConfig& config, QTable* q_table_out) {
  return aggregate_curves(run_experiment_curves(config, q_table_out));
}

void write_csv(const CurveSet& curves, std::ostream& out) {
  out << "trial,mean_payoff,std_payoff,runs\n";
  char buf[96];
  for (std::size_t k = 0; k < curves.trials.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6g,%.6g,%ld\n", curves.trials[k],
                  curves.mean[k], curves.stddev[k], curves.runs);
    out << buf;
  }
}

void write_csv_file(const CurveSet& curves, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(curves, out);
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<EquivalenceRow> equivalence_rows(const ExperimentConfig& base) {
  ExperimentConfig config = base;
  config.eval_every = 0;
  config.eval_episodes = 0;  // training draws only
  validate_config(config);
  if (config.algo == Algo::q_central)
    throw ConfigError("equivalence compares dgd and joint modes");
  auto dynamics = make_scenario(config);

  std::vector<std::vector<double>> trajectory[2];
  for (int mode = 0; mode < 2; ++mode) {
    RunRng rng(config.seed, 0);
    auto policies = make_policies(config, *dynamics);
    std::vector<Policy*> raw;
    for (auto& p : policies) {
      init_policy_params(*p, static_cast<int>(raw.size()), rng,
                         config.init_range);
      raw.push_back(p.get());
    }
    TrainerConfig tc;
    tc.alpha = config.alpha;
    tc.gamma = config.gamma;
    tc.trials = config.trials;
    tc.max_steps = config.max_steps;
    tc.sum_bound = config.sum_bound;
    auto& store = trajectory[mode];
    store.reserve(config.trials);
    tc.on_trial = [&store](long, std::span<const double> params) {
      store.emplace_back(params.begin(), params.end());
    };
    if (mode == 0)
      dgd_train(*dynamics, raw, tc, rng);
    else
      joint_train(*dynamics, raw, tc, rng);
  }

  std::vector<EquivalenceRow> rows;
  rows.reserve(trajectory[0].size());
  for (std::size_t t = 0; t < trajectory[0].size(); ++t) {
    const auto& d = trajectory[0][t];
    const auto& j = trajectory[1][t];
    DGD_CHECK(d.size() == j.size(), "trajectories disagree on layout");
    double worst = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      const double scale =
          std::max({1.0, std::abs(d[k]), std::abs(j[k])});
      worst = std::max(worst, std::abs(d[k] - j[k]) / scale);
    }
    rows.push_back({static_cast<long>(t + 1), worst});
  }
  return rows;
}

void write_equivalence_csv(std::span<const EquivalenceRow> rows,
                           std::ostream& out) {
  out << "trial,max_rel_divergence\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%ld,%.6g\n", row.trial, row.divergence);
    out << buf;
  }
}

double max_divergence(std::span<const EquivalenceRow> rows) {
  double worst = 0.0;
  for (const auto& row : rows) worst = std::max(worst, row.divergence);
  return worst;
}

}  // namespace dgd
