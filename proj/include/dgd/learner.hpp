#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dgd/policy.hpp"
#include "dgd/rollout.hpp"

namespace dgd {

// Upper bound of the inner score sum for the reward at time t.
// causal_inclusive credits choices up to and including step t (default:
// the action at t precedes the reward at t, so it gets credit);
// paper_literal stops at t-1, kept for fidelity experiments.
enum class SumBound { causal_inclusive, paper_literal };

// Running sums realizing the per-episode gradient estimate: an eligibility
// z_t accumulating scores of the choices made so far, and a total picking
// up gamma^t r(t) * z_t at every reward.
class GradientAccumulator {
 public:
  explicit GradientAccumulator(std::size_t size)
      : eligibility_(size, 0.0), total_(size, 0.0) {}

  void add_score(const Policy& policy, const TraceEntry& entry,
                 std::size_t offset, std::size_t size) {
    policy.accumulate_score(entry,
                            std::span(eligibility_).subspan(offset, size));
  }
  void on_reward(double discounted_reward);
  void reset();

  std::span<const double> total() const { return total_; }
  std::span<const double> eligibility() const { return eligibility_; }

 private:
  std::vector<double> eligibility_;
  std::vector<double> total_;
};

// Gradient of the discounted episode return with respect to one agent's
// weights, single pass over its trace.
std::vector<double> episode_gradient(const EpisodeHistory& history,
                                     const Policy& policy, int agent,
                                     double gamma,
                                     SumBound bound = SumBound::causal_inclusive);

// Same estimate over the concatenation of all agents' weight vectors,
// computed by one owner from the joint trace.
std::vector<double> joint_episode_gradient(
    const EpisodeHistory& history, std::span<const Policy* const> policies,
    double gamma, SumBound bound = SumBound::causal_inclusive);

// w <- clamp(w + alpha * gradient). Gradient ascent on the value.
void apply_update(Policy& policy, std::span<const double> gradient,
                  double alpha, double weight_clamp = 50.0);

struct TrainerConfig {
  double alpha = 0.003;
  double gamma = 0.99;
  long trials = 1;
  long eval_every = 0;      // 0: only the initial and (if aligned) final
  long eval_episodes = 0;   // 0: no evaluations at all
  int max_steps = 1;
  SumBound sum_bound = SumBound::causal_inclusive;
  double weight_clamp = 50.0;
  // Called after every trial's update with the concatenated parameters.
  std::function<void(long trial, std::span<const double> params)> on_trial;
};

struct CurvePoint {
  long trial = 0;
  double mean_payoff = 0.0;
};
using LearningCurve = std::vector<CurvePoint>;

// Mean undiscounted payoff of eval_episodes fresh rollouts at checkpoint
// `trial`, using evaluation streams (training draws are untouched).
double evaluate_policies(const GameDynamics& dynamics,
                         std::span<const Policy* const> policies,
                         long trial, long eval_episodes, int max_steps,
                         const RunRng& rng);

// Each agent runs the gradient step on its own weights from the shared
// episode stream.
LearningCurve dgd_train(const GameDynamics& dynamics,
                        std::span<Policy* const> policies,
                        const TrainerConfig& config, const RunRng& rng);

// One owner updates the whole factored controller from the joint trace.
// With the same seed this produces the same parameter trajectory as
// dgd_train; the equivalence suite asserts it.
LearningCurve joint_train(const GameDynamics& dynamics,
                          std::span<Policy* const> policies,
                          const TrainerConfig& config, const RunRng& rng);

}  // namespace dgd
