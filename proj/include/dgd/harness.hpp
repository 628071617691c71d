#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "dgd/learner.hpp"
#include "dgd/qlearn.hpp"

namespace dgd {

enum class Algo { dgd, joint, q_central };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One experiment: `runs` independent seeded runs of one scenario/algorithm
// pair, evaluated every eval_every trials. Negative numeric fields are
// filled by resolve_defaults from the scenario's standard values.
struct ExperimentConfig {
  std::string scenario = "coordination";
  Algo algo = Algo::dgd;
  Observability observability = Observability::partial;
  bool observability_set = false;  // explicitly requested
  double alpha = -1.0;
  double gamma = -1.0;
  double epsilon = 0.4;
  double theta = 1.0;
  double init_range = 0.5;  // weights start uniform in [-range, +range]
  int fsc_states = 1;       // 1 = reactive policy
  long trials = -1;
  long runs = 10;
  long eval_every = -1;
  long eval_episodes = -1;
  int max_steps = -1;
  std::uint64_t seed = 0;
  bool no_pass = false;
  SumBound sum_bound = SumBound::causal_inclusive;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_path;
};

void resolve_defaults(ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);  // throws ConfigError

std::unique_ptr<GameDynamics> make_scenario(const ExperimentConfig& config);
std::vector<std::unique_ptr<Policy>> make_policies(
    const ExperimentConfig& config, const GameDynamics& dynamics);
void init_policy_params(Policy& policy, int agent, const RunRng& rng,
                        double range);

// Aggregated learning curves: sample mean and standard deviation per
// checkpoint across runs.
struct CurveSet {
  std::vector<long> trials;
  std::vector<double> mean;
  std::vector<double> stddev;
  long runs = 0;
};

CurveSet aggregate_curves(std::span<const LearningCurve> curves);

// Runs the experiment; run r uses random streams keyed by (seed, r). When
// q_table_out is non-null and the algorithm is q-central, run 0's table is
// copied there.
std::vector<LearningCurve> run_experiment_curves(
    const ExperimentConfig& config, QTable* q_table_out = nullptr);
CurveSet run_experiment(const ExperimentConfig& config,
                        QTable* q_table_out = nullptr);

void write_csv(const CurveSet& curves, std::ostream& out);
void write_csv_file(const CurveSet& curves, const std::string& path);

struct EquivalenceRow {
  long trial = 0;
  double divergence = 0.0;  // max over weights of |d-j| / max(1,|d|,|j|)
};

// Trains distributed and joint modes from identical starts on the same
// seed and reports the per-trial parameter divergence.
std::vector<EquivalenceRow> equivalence_rows(const ExperimentConfig& config);
void write_equivalence_csv(std::span<const EquivalenceRow> rows,
                           std::ostream& out);
double max_divergence(std::span<const EquivalenceRow> rows);

}  // namespace dgd
