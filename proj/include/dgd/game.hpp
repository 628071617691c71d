#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dgd/rng.hpp"

namespace dgd {

// Environment states are opaque 64-bit ids; each environment owns its
// encoding. Policies never see them.
using State = std::uint64_t;

struct AgentSpec {
  int action_count = 0;
  int observation_count = 0;
};

struct ResetOutcome {
  State state = 0;
  std::vector<int> observations;  // one per learning agent
};

struct StepOutcome {
  State next_state = 0;
  double reward = 0.0;
  std::vector<int> observations;
  bool terminal = false;
};

// Sampling interface shared by all learners. `actions` holds one action
// index per learning agent; scripted opponents live inside the dynamics.
class GameDynamics {
 public:
  virtual ~GameDynamics() = default;

  virtual int agent_count() const = 0;
  virtual const AgentSpec& agent_spec(int agent) const = 0;

  virtual ResetOutcome reset(const EpisodeRng& rng) const = 0;
  virtual StepOutcome step(State state, std::span<const int> actions,
                           std::uint32_t t, const EpisodeRng& rng) const = 0;
  virtual bool terminal(State state) const = 0;
};

// Exact view of a small game: explicit distributions for enumeration
// oracles. States are dense ints here.
class ExactGame {
 public:
  virtual ~ExactGame() = default;

  virtual int agent_count() const = 0;
  virtual const AgentSpec& agent_spec(int agent) const = 0;
  virtual int state_count() const = 0;
  virtual std::vector<std::pair<int, double>> initial_states() const = 0;
  virtual std::vector<std::pair<int, double>> transitions(
      int state, std::span<const int> actions) const = 0;
  virtual double reward(int state, std::span<const int> actions) const = 0;
  virtual std::vector<double> observation_dist(int agent, int state) const = 0;
  virtual bool terminal(int state) const = 0;
};

// Checks the probability-structure invariants (distributions sum to 1
// within 1e-12, alphabets consistent). Throws std::invalid_argument.
void validate_exact_game(const ExactGame& game);

}  // namespace dgd
