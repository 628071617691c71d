#pragma once

#include <vector>

#include "dgd/game.hpp"

namespace dgd {

enum class OpponentKind { random, greedy, defensive };

// Action alphabet. Learners trained without Pass use only the first five.
enum SoccerAction : int {
  kNorth = 0,
  kSouth = 1,
  kEast = 2,
  kWest = 3,
  kStay = 4,
  kPass = 5,
};

struct SoccerConfig {
  std::vector<OpponentKind> opponents = {OpponentKind::random};
  bool no_pass = false;  // removes Pass from the learners' alphabet only
};

// Observation content of one learner: who has the ball (self / teammate /
// opponent side) and the status of the four neighbor cells.
struct SoccerObservation {
  int ball_flag = 0;          // 0 self, 1 teammate, 2 opponent side
  int neighbors[4] = {0, 0, 0, 0};  // N,S,E,W: 0 open, 1 out of field, 2 occupied
};

int encode_observation(const SoccerObservation& obs);
SoccerObservation decode_observation(int code);
inline constexpr int kSoccerObservationCount = 243;  // 3 * 3^4

// 6x5 grid soccer. Two learners attack the left goal; scripted opponents
// defend it and attack the right one. A goal is scored by the ball
// possessor moving off-grid through a goal cell (rows 1-2 of the columns
// just outside the field); the game then ends with reward +1 (left goal)
// or -1 (right goal) for the learner team. All players pick actions, then
// the actions execute in a uniformly random order: a move into an occupied
// cell is cancelled and hands the ball to the stationary occupant if the
// mover held it; other off-grid moves are cancelled. Pass hands the ball
// to the passer's teammate at the step boundary, provided the passer still
// holds it.
class SoccerWorld : public GameDynamics {
 public:
  static constexpr int kWidth = 6;
  static constexpr int kHeight = 5;
  static constexpr int kGoalRowLow = 1;
  static constexpr int kGoalRowHigh = 2;
  static constexpr int kLearnerCount = 2;

  explicit SoccerWorld(SoccerConfig config);

  int agent_count() const override { return kLearnerCount; }
  const AgentSpec& agent_spec(int agent) const override;
  ResetOutcome reset(const EpisodeRng& rng) const override;
  StepOutcome step(State state, std::span<const int> actions, std::uint32_t t,
                   const EpisodeRng& rng) const override;
  bool terminal(State state) const override;

  struct Position {
    int x = 0;
    int y = 0;
    bool operator==(const Position&) const = default;
  };

  // Decoded non-terminal state: learners first, then opponents.
  struct Situation {
    std::vector<Position> players;
    int possessor = 0;
    bool operator==(const Situation&) const = default;
  };

  struct StepResult {
    Situation situation;
    double reward = 0.0;
    bool terminal = false;
  };

  int player_count() const { return kLearnerCount + opponent_count(); }
  int opponent_count() const {
    return static_cast<int>(config_.opponents.size());
  }
  const SoccerConfig& config() const { return config_; }

  State encode(const Situation& s) const;
  Situation decode(State state) const;
  static State terminal_state(double reward);
  static double terminal_reward(State state);

  int observe(const Situation& s, int learner) const;

  // Deterministic core of one step: execute everyone's action in the given
  // order, then resolve a pending pass. Exposed for permutation tests.
  StepResult apply_actions(const Situation& s, std::span<const int> actions,
                           std::span<const int> order) const;

  int opponent_action(OpponentKind kind, const Situation& s, int player,
                      RandomStream& stream) const;

  int teammate(int player) const;

  static bool in_goal_area(Position p) {
    return p.x <= 1 && p.y >= kGoalRowLow && p.y <= kGoalRowHigh;
  }

 private:
  int occupant_at(const Situation& s, Position p) const;  // -1 if free
  int step_toward(const Situation& s, int player, Position target,
                  RandomStream& stream) const;

  SoccerConfig config_;
  AgentSpec learner_spec_;
};

}  // namespace dgd
