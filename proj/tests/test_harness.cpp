#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "dgd/harness.hpp"
#include "dgd/rollout.hpp"

using namespace dgd;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig smoke_config() {
  ExperimentConfig config;
  config.scenario = "coordination";
  config.algo = Algo::dgd;
  config.trials = 60;
  config.runs = 3;
  config.eval_every = 30;
  config.eval_episodes = 10;
  config.seed = 7;
  resolve_defaults(config);
  return config;
}

}  // namespace

TEST_CASE("defaults follow the scenario") {
  ExperimentConfig c;
  c.scenario = "coordination";
  resolve_defaults(c);
  CHECK(c.alpha == 0.003);
  CHECK(c.gamma == 0.99);
  CHECK(c.trials == 50000);
  CHECK(c.eval_every == 500);
  CHECK(c.eval_episodes == 200);
  CHECK(c.max_steps == 2);

  ExperimentConfig s;
  s.scenario = "soccer-greedy";
  resolve_defaults(s);
  CHECK(s.alpha == 0.05);
  CHECK(s.gamma == 0.999);
  CHECK(s.trials == 200000);
  CHECK(s.max_steps == 1000);

  ExperimentConfig q;
  q.scenario = "soccer-defensive";
  q.algo = Algo::q_central;
  resolve_defaults(q);
  CHECK(q.alpha == 0.1);
  CHECK(q.epsilon == 0.4);
}

TEST_CASE("config validation rejects bad combinations") {
  ExperimentConfig c = smoke_config();
  c.scenario = "soccer-sideways";
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = smoke_config();
  c.no_pass = true;  // coordination has no Pass action
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = smoke_config();
  c.observability = Observability::full;
  c.observability_set = true;  // full input needs the central controller
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = smoke_config();
  c.algo = Algo::q_central;
  c.fsc_states = 4;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = smoke_config();
  c.runs = 0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("aggregation matches a naive two-pass computation") {
  std::vector<LearningCurve> curves(5);
  RunRng rng(61, 0);
  auto stream = rng.stream(0, 0, 0, 0, Purpose::generic);
  for (auto& curve : curves)
    for (long t = 0; t <= 4; ++t)
      curve.push_back({t * 10, stream.uniform() * 20.0 - 10.0});
  CurveSet set = aggregate_curves(curves);
  REQUIRE(set.trials.size() == 5);
  CHECK(set.runs == 5);
  for (std::size_t k = 0; k < set.trials.size(); ++k) {
    double sum = 0.0;
    for (const auto& curve : curves) sum += curve[k].mean_payoff;
    const double mean = sum / curves.size();
    double sq = 0.0;
    for (const auto& curve : curves)
      sq += (curve[k].mean_payoff - mean) * (curve[k].mean_payoff - mean);
    const double sd = std::sqrt(sq / (curves.size() - 1));
    CHECK(std::abs(set.mean[k] - mean) <= 1e-12);
    CHECK(std::abs(set.stddev[k] - sd) <= 1e-12);
  }
}

TEST_CASE("csv output is exact and parseable") {
  CurveSet set;
  set.trials = {0, 500};
  set.mean = {1.0 / 3.0, 9.875};
  set.stddev = {0.03125, 0.0};
  set.runs = 10;
  std::ostringstream out;
  write_csv(set, out);
  CHECK(out.str() ==
        "trial,mean_payoff,std_payoff,runs\n"
        "0,0.333333,0.03125,10\n"
        "500,9.875,0,10\n");

  // round trip within print precision
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  int k = 0;
  while (std::getline(in, line)) {
    long trial, runs;
    double mean, sd;
    REQUIRE(std::sscanf(line.c_str(), "%ld,%lf,%lf,%ld", &trial, &mean, &sd,
                        &runs) == 4);
    CHECK(trial == set.trials[k]);
    CHECK(mean == doctest::Approx(set.mean[k]).epsilon(1e-5));
    CHECK(sd == doctest::Approx(set.stddev[k]).epsilon(1e-5));
    ++k;
  }
  CHECK(k == 2);
}

TEST_CASE("experiments are reproducible byte for byte") {
  ExperimentConfig config = smoke_config();
  CurveSet a = run_experiment(config);
  CurveSet b = run_experiment(config);
  std::ostringstream sa, sb;
  write_csv(a, sa);
  write_csv(b, sb);
  CHECK(sa.str() == sb.str());

  // and independent of the thread count
  config.threads = 1;
  CurveSet c = run_experiment(config);
  config.threads = 3;
  CurveSet d = run_experiment(config);
  std::ostringstream sc, sd;
  write_csv(c, sc);
  write_csv(d, sd);
  CHECK(sc.str() == sd.str());
}

TEST_CASE("runs use distinct random streams") {
  ExperimentConfig config;
  config.scenario = "soccer-random";
  resolve_defaults(config);
  auto dynamics = make_scenario(config);
  std::set<std::string> seen;
  for (std::uint64_t run = 0; run < 100; ++run) {
    RunRng rng(config.seed, run);
    auto policies = make_policies(config, *dynamics);
    std::vector<const Policy*> raw;
    for (auto& p : policies) {
      init_policy_params(*p, static_cast<int>(raw.size()), rng, 0.5);
      raw.push_back(p.get());
    }
    auto h = rollout(*dynamics, raw, 50, EpisodeRng(rng, 0, 0));
    std::ostringstream text;
    write_history(h, text);
    seen.insert(text.str());
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("equivalence csv format") {
  std::vector<EquivalenceRow> rows = {{1, 0.0}, {2, 1.5e-12}};
  std::ostringstream out;
  write_equivalence_csv(rows, out);
  CHECK(out.str() ==
        "trial,max_rel_divergence\n"
        "1,0\n"
        "2,1.5e-12\n");
  CHECK(max_divergence(rows) == 1.5e-12);
}

TEST_CASE("fsc policies plug into the harness") {
  ExperimentConfig config;
  config.scenario = "soccer-defensive";
  config.fsc_states = 4;
  resolve_defaults(config);
  auto dynamics = make_scenario(config);
  auto policies = make_policies(config, *dynamics);
  CHECK(policies[0]->param_count() == 4 + 4 * 243 * 4 + 4 * 6);
  // a short fsc training run goes through
  config.trials = 10;
  config.runs = 1;
  config.eval_every = 10;
  config.eval_episodes = 2;
  config.max_steps = 60;
  CurveSet set = run_experiment(config);
  CHECK(set.trials.size() == 2);
}
