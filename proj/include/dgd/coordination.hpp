#pragma once

#include "dgd/game.hpp"

namespace dgd {

// Two-agent coordination game on six states. From s1 the first agent alone
// picks the branch: action a leads to s2, action b to s3. From s2 matching
// actions pay +10 (s4), mismatched pay -10 (s5). From s3 any joint action
// pays +5 (s6). s4, s5, s6 are terminal; rewards are delivered on entry.
//
// Observation alphabets are restricted to two symbols per agent. Agent 0
// distinguishes s2 (obs 1) from everywhere else (obs 0, its branch choice
// at s1); agent 1 distinguishes s2 (obs 0, its only relevant decision)
// from everywhere else (obs 1). Actions taken at aliased states never
// influence the outcome, and the aliases are chosen so that the bottom
// branch's +5 reward cannot random-walk the s2 coordination weights: those
// weight slices are exercised only when s2 is actually visited.
class CoordinationGame : public GameDynamics, public ExactGame {
 public:
  static constexpr int kS1 = 0, kS2 = 1, kS3 = 2, kS4 = 3, kS5 = 4, kS6 = 5;

  CoordinationGame();

  // GameDynamics
  int agent_count() const override { return 2; }
  const AgentSpec& agent_spec(int agent) const override;
  ResetOutcome reset(const EpisodeRng& rng) const override;
  StepOutcome step(State state, std::span<const int> actions, std::uint32_t t,
                   const EpisodeRng& rng) const override;
  bool terminal(State state) const override { return state >= kS4; }

  // ExactGame
  int state_count() const override { return 6; }
  std::vector<std::pair<int, double>> initial_states() const override;
  std::vector<std::pair<int, double>> transitions(
      int state, std::span<const int> actions) const override;
  double reward(int state, std::span<const int> actions) const override;
  std::vector<double> observation_dist(int agent, int state) const override;
  bool terminal(int state) const override { return state >= kS4; }

  // Deterministic transition table: (next_state, reward on entry).
  static std::pair<int, double> dynamics(int state, int action0, int action1);

  int observe(int agent, int state) const;

 private:
  AgentSpec specs_[2];
};

}  // namespace dgd
