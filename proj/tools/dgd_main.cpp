#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "dgd/analysis.hpp"
#include "dgd/harness.hpp"

namespace {

dgd::Algo parse_algo(const std::string& name) {
  if (name == "dgd") return dgd::Algo::dgd;
  if (name == "joint") return dgd::Algo::joint;
  if (name == "q-central") return dgd::Algo::q_central;
  throw dgd::ConfigError("unknown algorithm: " + name);
}

// key = value lines mirroring the CLI flags; flags given on the command
// line win over file values.
void apply_config_file(const std::string& path, dgd::ExperimentConfig& config,
                       const std::set<std::string>& overridden) {
  std::ifstream in(path);
  if (!in) throw dgd::ConfigError("cannot read config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, eq, value;
    if (!(ls >> key)) continue;  // blank
    if (!(ls >> eq >> value) || eq != "=")
      throw dgd::ConfigError(path + ":" + std::to_string(line_no) +
                             ": expected 'key = value'");
    if (overridden.count(key)) continue;
    if (key == "scenario") config.scenario = value;
    else if (key == "algo") config.algo = parse_algo(value);
    else if (key == "observability") {
      config.observability = value == "full" ? dgd::Observability::full
                                             : dgd::Observability::partial;
      config.observability_set = true;
    } else if (key == "alpha") config.alpha = std::stod(value);
    else if (key == "gamma") config.gamma = std::stod(value);
    else if (key == "epsilon") config.epsilon = std::stod(value);
    else if (key == "theta") config.theta = std::stod(value);
    else if (key == "init-range") config.init_range = std::stod(value);
    else if (key == "fsc-states") config.fsc_states = std::stoi(value);
    else if (key == "trials") config.trials = std::stol(value);
    else if (key == "runs") config.runs = std::stol(value);
    else if (key == "eval-every") config.eval_every = std::stol(value);
    else if (key == "eval-episodes") config.eval_episodes = std::stol(value);
    else if (key == "max-steps") config.max_steps = std::stoi(value);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "no-pass") config.no_pass = value == "true" || value == "1";
    else if (key == "sum-bound")
      config.sum_bound = value == "paper" ? dgd::SumBound::paper_literal
                                          : dgd::SumBound::causal_inclusive;
    else if (key == "threads") config.threads = std::stoi(value);
    else if (key == "out") config.out_path = value;
    else
      throw dgd::ConfigError(path + ": unknown key: " + key);
  }
}

struct CommonFlags {
  std::string algo = "dgd";
  std::string observability;
  std::string sum_bound = "causal";
  std::string config_file;
};

void add_experiment_options(CLI::App* cmd, dgd::ExperimentConfig& config,
                            CommonFlags& flags) {
  cmd->add_option("--scenario", config.scenario,
                  "coordination | soccer-random | soccer-greedy | "
                  "soccer-defensive | soccer-2v2");
  cmd->add_option("--algo", flags.algo, "dgd | joint | q-central");
  cmd->add_option("--observability", flags.observability,
                  "full | partial (q-central only)");
  cmd->add_option("--alpha", config.alpha, "learning rate");
  cmd->add_option("--gamma", config.gamma, "discount factor");
  cmd->add_option("--epsilon", config.epsilon, "exploration rate (q-central)");
  cmd->add_option("--theta", config.theta, "softmax temperature");
  cmd->add_option("--init-range", config.init_range,
                  "weights start uniform in [-range, range]");
  cmd->add_option("--fsc-states", config.fsc_states,
                  "internal controller states (1 = reactive)");
  cmd->add_option("--trials", config.trials, "training episodes per run");
  cmd->add_option("--runs", config.runs, "independent seeded runs");
  cmd->add_option("--eval-every", config.eval_every, "checkpoint interval");
  cmd->add_option("--eval-episodes", config.eval_episodes,
                  "evaluation rollouts per checkpoint");
  cmd->add_option("--max-steps", config.max_steps, "episode length cap");
  cmd->add_option("--seed", config.seed, "base seed");
  cmd->add_flag("--no-pass", config.no_pass,
                "remove Pass from the learners' actions");
  cmd->add_option("--sum-bound", flags.sum_bound, "causal | paper");
  cmd->add_option("--threads", config.threads, "worker threads (0 = auto)");
  cmd->add_option("--out", config.out_path, "output CSV path");
  cmd->add_option("--config", flags.config_file, "key = value config file");
}

void finish_config(CLI::App* cmd, dgd::ExperimentConfig& config,
                   CommonFlags& flags) {
  std::set<std::string> overridden;
  for (const auto* opt : cmd->get_options())
    if (opt->count() > 0 && opt->get_name().size() > 2)
      overridden.insert(opt->get_name().substr(2));
  if (!flags.config_file.empty())
    apply_config_file(flags.config_file, config, overridden);
  if (overridden.count("algo")) config.algo = parse_algo(flags.algo);
  if (overridden.count("observability")) {
    if (flags.observability != "full" && flags.observability != "partial")
      throw dgd::ConfigError("observability must be full or partial");
    config.observability = flags.observability == "full"
                               ? dgd::Observability::full
                               : dgd::Observability::partial;
    config.observability_set = true;
  }
  if (overridden.count("sum-bound")) {
    if (flags.sum_bound != "causal" && flags.sum_bound != "paper")
      throw dgd::ConfigError("sum-bound must be causal or paper");
    config.sum_bound = flags.sum_bound == "paper"
                           ? dgd::SumBound::paper_literal
                           : dgd::SumBound::causal_inclusive;
  }
  dgd::resolve_defaults(config);
  dgd::validate_config(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"policy search and q-learning for identical-payoff games"};
  app.require_subcommand(1);

  dgd::ExperimentConfig run_config;
  CommonFlags run_flags;
  std::string q_dump_path;
  long q_dump_max = 250000;
  auto* run_cmd = app.add_subcommand("run", "train and write a learning curve");
  add_experiment_options(run_cmd, run_config, run_flags);
  run_cmd->add_option("--q-dump", q_dump_path,
                      "write the run-0 q-table (q-central only)");
  run_cmd->add_option("--q-dump-max", q_dump_max,
                      "refuse q-table dumps beyond this many keys");

  dgd::ExperimentConfig eq_config;
  eq_config.trials = 1000;
  CommonFlags eq_flags;
  auto* eq_cmd = app.add_subcommand(
      "equivalence", "per-trial parameter divergence of dgd vs joint");
  add_experiment_options(eq_cmd, eq_config, eq_flags);

  int grid_n = 11;
  double grid_gamma = 0.99;
  std::string grid_out;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "nash classification of the "
                                    "coordination policy grid");
  analyze_cmd->add_option("--grid", grid_n, "points per axis");
  analyze_cmd->add_option("--gamma", grid_gamma, "discount factor");
  analyze_cmd->add_option("--out", grid_out, "output CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      finish_config(run_cmd, run_config, run_flags);
      if (!q_dump_path.empty() && run_config.algo != dgd::Algo::q_central)
        throw dgd::ConfigError("--q-dump requires --algo q-central");
      dgd::QTable table(1);
      dgd::CurveSet curves = dgd::run_experiment(
          run_config, q_dump_path.empty() ? nullptr : &table);
      if (run_config.out_path.empty())
        dgd::write_csv(curves, std::cout);
      else
        dgd::write_csv_file(curves, run_config.out_path);
      if (!q_dump_path.empty()) {
        if (static_cast<long>(table.key_count()) > q_dump_max)
          throw dgd::ConfigError(
              "q-table too large to dump; raise --q-dump-max");
        std::ofstream out(q_dump_path, std::ios::binary);
        if (!out)
          throw std::runtime_error("cannot open for writing: " + q_dump_path);
        table.dump(out);
      }
    } else if (eq_cmd->parsed()) {
      finish_config(eq_cmd, eq_config, eq_flags);
      auto rows = dgd::equivalence_rows(eq_config);
      if (eq_config.out_path.empty()) {
        dgd::write_equivalence_csv(rows, std::cout);
      } else {
        std::ofstream out(eq_config.out_path, std::ios::binary);
        if (!out)
          throw std::runtime_error("cannot open for writing: " +
                                   eq_config.out_path);
        dgd::write_equivalence_csv(rows, out);
      }
      std::cerr << "max divergence: " << dgd::max_divergence(rows) << "\n";
    } else if (analyze_cmd->parsed()) {
      if (grid_out.empty()) {
        dgd::write_nash_grid_csv(grid_n, grid_gamma, std::cout);
      } else {
        std::ofstream out(grid_out, std::ios::binary);
        if (!out)
          throw std::runtime_error("cannot open for writing: " + grid_out);
        dgd::write_nash_grid_csv(grid_n, grid_gamma, out);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
