#include "dgd/qlearn.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "dgd/check.hpp"
#include "dgd/kernels.hpp"

namespace dgd {

QTable::QTable(int joint_action_count) : actions_(joint_action_count) {
  DGD_CHECK(joint_action_count >= 1, "need at least one joint action");
}

double QTable::value(State key, int action) const {
  DGD_CHECK(action >= 0 && action < actions_, "action index out of range");
  auto it = rows_.find(key);
  return it == rows_.end() ? 0.0 : it->second[action];
}

double QTable::max_value(State key) const {
  auto it = rows_.find(key);
  if (it == rows_.end()) return 0.0;
  return kernels::max_value(it->second);
}

std::vector<double>& QTable::row(State key) {
  auto [it, inserted] = rows_.try_emplace(key);
  if (inserted) it->second.assign(actions_, 0.0);
  return it->second;
}

void QTable::dump(std::ostream& out) const {
  std::vector<State> keys;
  keys.reserve(rows_.size());
  for (const auto& [key, _] : rows_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  char buf[64];
  for (State key : keys) {
    const auto& row = rows_.at(key);
    for (int a = 0; a < actions_; ++a) {
      std::snprintf(buf, sizeof(buf), ",%d,%.17g\n", a, row[a]);
      out << key << buf;
    }
  }
}

void q_update(QTable& table, State key, int action, double reward,
              State next_key, bool terminal, double alpha, double gamma) {
  DGD_CHECK(alpha > 0.0 && alpha <= 1.0, "alpha must be in (0,1]");
  const double target =
      terminal ? reward : reward + gamma * table.max_value(next_key);
  double& q = table.row(key)[action];
  q += alpha * (target - q);
}

int select_action(const QTable& table, State key, double epsilon,
                  RandomStream& explore, RandomStream& tie_break) {
  const int actions = table.joint_action_count();
  if (epsilon > 0.0 && explore.uniform() < epsilon)
    return static_cast<int>(
        explore.uniform_int(static_cast<std::uint32_t>(actions)));
  // greedy with uniform tie-breaking; unseen keys tie at 0 everywhere
  std::vector<int> best;
  best.reserve(actions);
  double best_value = table.value(key, 0);
  best.push_back(0);
  for (int a = 1; a < actions; ++a) {
    const double v = table.value(key, a);
    if (v > best_value) {
      best_value = v;
      best.clear();
      best.push_back(a);
    } else if (v == best_value) {
      best.push_back(a);
    }
  }
  if (best.size() == 1) return best[0];
  return best[tie_break.uniform_int(static_cast<std::uint32_t>(best.size()))];
}

int joint_action_count(const GameDynamics& dynamics) {
  int count = 1;
  for (int i = 0; i < dynamics.agent_count(); ++i)
    count *= dynamics.agent_spec(i).action_count;
  return count;
}

void decode_joint_action(const GameDynamics& dynamics, int joint,
                         std::vector<int>& actions) {
  actions.resize(dynamics.agent_count());
  for (int i = 0; i < dynamics.agent_count(); ++i) {
    const int a_count = dynamics.agent_spec(i).action_count;
    actions[i] = joint % a_count;
    joint /= a_count;
  }
}

State joint_observation_key(const GameDynamics& dynamics,
                            std::span<const int> observations) {
  State key = 0;
  for (int i = dynamics.agent_count() - 1; i >= 0; --i) {
    key = key * static_cast<State>(dynamics.agent_spec(i).observation_count) +
          static_cast<State>(observations[i]);
  }
  return key;
}

namespace {

State make_key(const GameDynamics& dynamics, Observability obs, State state,
               std::span<const int> observations) {
  return obs == Observability::full
             ? state
             : joint_observation_key(dynamics, observations);
}

// Runs one episode under the table's policy; updates it when learn_table
// is non-null (pointing at the same table).
double run_q_episode(const GameDynamics& dynamics, Observability obs,
                     const QTable& table, QTable* learn_table, double epsilon,
                     double alpha, double gamma, int max_steps,
                     const EpisodeRng& rng) {
  ResetOutcome start = dynamics.reset(rng);
  State state = start.state;
  State key = make_key(dynamics, obs, state, start.observations);
  std::vector<int> actions;
  double payoff = 0.0;
  for (std::uint32_t t = 1; t <= static_cast<std::uint32_t>(max_steps); ++t) {
    auto explore = rng.at(t, kCentralEntity, Purpose::q_explore);
    auto tie = rng.at(t, kCentralEntity, Purpose::q_tie_break);
    const int joint = select_action(table, key, epsilon, explore, tie);
    decode_joint_action(dynamics, joint, actions);
    StepOutcome outcome = dynamics.step(state, actions, t, rng);
    payoff += outcome.reward;
    const State next_key =
        outcome.terminal
            ? 0
            : make_key(dynamics, obs, outcome.next_state,
                       outcome.observations);
    if (learn_table != nullptr)
      q_update(*learn_table, key, joint, outcome.reward, next_key,
               outcome.terminal, alpha, gamma);
    if (outcome.terminal) break;
    state = outcome.next_state;
    key = next_key;
  }
  return payoff;
}

}  // namespace

double greedy_eval(const QTable& table, const GameDynamics& dynamics,
                   Observability obs, long checkpoint_trial,
                   long eval_episodes, int max_steps, const RunRng& rng) {
  DGD_CHECK(eval_episodes >= 1, "need at least one evaluation episode");
  double sum = 0.0;
  for (long j = 0; j < eval_episodes; ++j) {
    sum += run_q_episode(dynamics, obs, table, nullptr, 0.0, 1.0, 0.0,
                         max_steps, EpisodeRng(rng, checkpoint_trial, 1 + j));
  }
  return sum / static_cast<double>(eval_episodes);
}

LearningCurve q_train(const GameDynamics& dynamics, Observability obs,
                      QTable& table, const QConfig& config,
                      const RunRng& rng) {
  DGD_CHECK(config.trials >= 1, "need at least one trial");
  LearningCurve curve;
  auto checkpoint = [&](long trial) {
    if (config.eval_episodes <= 0) return;
    curve.push_back({trial, greedy_eval(table, dynamics, obs, trial,
                                        config.eval_episodes,
                                        config.max_steps, rng)});
  };
  auto aligned = [&](long trial) {
    return config.eval_every > 0 && trial % config.eval_every == 0;
  };
  for (long trial = 0; trial < config.trials; ++trial) {
    if (trial == 0 || aligned(trial)) checkpoint(trial);
    run_q_episode(dynamics, obs, table, &table, config.epsilon, config.alpha,
                  config.gamma, config.max_steps, EpisodeRng(rng, trial, 0));
  }
  if (aligned(config.trials)) checkpoint(config.trials);
  return curve;
}

}  // namespace dgd
