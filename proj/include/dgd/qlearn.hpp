#pragma once

#include <iosfwd>
#include <unordered_map>
#include <vector>

#include "dgd/game.hpp"
#include "dgd/learner.hpp"

namespace dgd {

// Central controller input: the full environment state, or the
// concatenation of all agents' current local observations.
enum class Observability { full, partial };

// Tabular action values over joint actions, default 0 for unseen keys.
class QTable {
 public:
  explicit QTable(int joint_action_count);

  int joint_action_count() const { return actions_; }
  double value(State key, int action) const;
  double max_value(State key) const;  // 0 for unseen keys
  std::vector<double>& row(State key);
  std::size_t key_count() const { return rows_.size(); }

  // "key,action,value" lines, keys sorted for reproducible output
  void dump(std::ostream& out) const;

 private:
  int actions_;
  std::unordered_map<State, std::vector<double>> rows_;
};

// One-step rule: Q <- Q + alpha * (target - Q), target = r for terminal
// transitions, else r + gamma * max_a' Q(next, a').
void q_update(QTable& table, State key, int action, double reward,
              State next_key, bool terminal, double alpha, double gamma);

// Epsilon-greedy with uniform tie-breaking over exact-equal maxima.
int select_action(const QTable& table, State key, double epsilon,
                  RandomStream& explore, RandomStream& tie_break);

// Mixed-radix joint action index <-> per-agent actions.
int joint_action_count(const GameDynamics& dynamics);
void decode_joint_action(const GameDynamics& dynamics, int joint,
                         std::vector<int>& actions);

// Concatenates local observations into one key.
State joint_observation_key(const GameDynamics& dynamics,
                            std::span<const int> observations);

struct QConfig {
  double alpha = 0.1;
  double gamma = 0.999;
  double epsilon = 0.4;
  long trials = 1;
  long eval_every = 0;
  long eval_episodes = 0;
  int max_steps = 1;
};

// Mean undiscounted payoff of the greedy policy (epsilon = 0) over
// episodes evaluated at the given checkpoint.
double greedy_eval(const QTable& table, const GameDynamics& dynamics,
                   Observability obs, long checkpoint_trial,
                   long eval_episodes, int max_steps, const RunRng& rng);

// Online central Q-learning, one update per environment step.
LearningCurve q_train(const GameDynamics& dynamics, Observability obs,
                      QTable& table, const QConfig& config, const RunRng& rng);

}  // namespace dgd
