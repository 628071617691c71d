#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dgd/game.hpp"

namespace dgd {

// A stochastic choice made by one agent's controller during a step,
// recorded with the probability vector it was drawn from. This is what
// makes the log-probability of the episode differentiable after the fact.
enum class ChoiceKind : std::uint8_t {
  initial_internal,
  internal_transition,
  action,
};

struct TraceEntry {
  ChoiceKind kind;
  std::uint32_t step;  // 0 for the initial internal state, else 1-based
  int internal_state;  // transition: n before; action: n after
  int observation;     // conditioning observation (actions: the one seen)
  int chosen;
  std::vector<double> probs;
};

struct AgentStepRecord {
  int internal_before = 0;
  int observation = 0;
  int internal_after = 0;
  int action = 0;
};

struct HistoryStep {
  State env_state = 0;  // state in which the actions were taken
  std::vector<AgentStepRecord> agents;
  double reward = 0.0;
};

// Joint episode history. Rewards are indexed from t = 1: steps[t-1] holds
// the step whose reward is r(t). Environment states are stored for oracle
// and diagnostic use only and are never visible to policies.
struct EpisodeHistory {
  State initial_state = 0;
  std::vector<int> initial_internal;           // n(0) per agent
  std::vector<HistoryStep> steps;              // t = 1..T
  std::vector<std::vector<TraceEntry>> traces; // per agent, step-ordered
  State final_state = 0;
  bool reached_terminal = false;

  int agent_count() const { return static_cast<int>(initial_internal.size()); }
  std::size_t length() const { return steps.size(); }

  double undiscounted_payoff() const;
  double discounted_return(double gamma) const;
};

// Per-agent projection h_i = <n_i(0), o_i(1), n_i(1), a_i(1), r(1), ...>.
struct AgentHistory {
  struct Step {
    int observation = 0;
    int internal_after = 0;
    int action = 0;
    double reward = 0.0;
    bool operator==(const Step&) const = default;
  };
  int initial_internal = 0;
  std::vector<Step> steps;
  bool operator==(const AgentHistory&) const = default;
};

// The observable content of a joint history (no environment states).
struct ObservedJointHistory {
  struct Step {
    std::vector<int> observations;
    std::vector<int> internal_after;
    std::vector<int> actions;
    double reward = 0.0;
    bool operator==(const Step&) const = default;
  };
  std::vector<int> initial_internal;
  std::vector<Step> steps;
  bool operator==(const ObservedJointHistory&) const = default;
};

AgentHistory project(const EpisodeHistory& history, int agent);
ObservedJointHistory observed_content(const EpisodeHistory& history);
// A collection of individual histories determines the joint history.
ObservedJointHistory reconstruct_joint(std::span<const AgentHistory> parts);

// Line-oriented text form, one step per line, for golden-file tests.
void write_history(const EpisodeHistory& history, std::ostream& out);

}  // namespace dgd
