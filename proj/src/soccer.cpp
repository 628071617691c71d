#include "dgd/soccer.hpp"

#include <algorithm>
#include <cstdlib>

#include "dgd/check.hpp"

namespace dgd {
namespace {

constexpr int kDx[4] = {0, 0, 1, -1};  // N,S,E,W
constexpr int kDy[4] = {1, -1, 0, 0};

constexpr std::uint64_t kTerminalBit = 1ull << 63;

}  // namespace

int encode_observation(const SoccerObservation& obs) {
  int code = obs.ball_flag;
  for (int k = 0; k < 4; ++k) code = code * 3 + obs.neighbors[k];
  return code;
}

SoccerObservation decode_observation(int code) {
  DGD_CHECK(code >= 0 && code < kSoccerObservationCount,
            "observation code out of range");
  SoccerObservation obs;
  for (int k = 3; k >= 0; --k) {
    obs.neighbors[k] = code % 3;
    code /= 3;
  }
  obs.ball_flag = code;
  return obs;
}

SoccerWorld::SoccerWorld(SoccerConfig config) : config_(std::move(config)) {
  DGD_CHECK(!config_.opponents.empty() && config_.opponents.size() <= 2,
            "one or two opponents supported");
  learner_spec_ = {config_.no_pass ? 5 : 6, kSoccerObservationCount};
}

const AgentSpec& SoccerWorld::agent_spec(int agent) const {
  DGD_CHECK(agent >= 0 && agent < kLearnerCount, "agent index out of range");
  return learner_spec_;
}

State SoccerWorld::encode(const Situation& s) const {
  DGD_CHECK(static_cast<int>(s.players.size()) == player_count(),
            "wrong player count");
  State state = 0;
  for (int i = 0; i < player_count(); ++i) {
    const Position& p = s.players[i];
    state |= static_cast<State>(p.x & 7) << (6 * i);
    state |= static_cast<State>(p.y & 7) << (6 * i + 3);
  }
  state |= static_cast<State>(s.possessor & 7) << 24;
  return state;
}

SoccerWorld::Situation SoccerWorld::decode(State state) const {
  DGD_CHECK(!(state & kTerminalBit), "cannot decode a terminal state");
  Situation s;
  s.players.resize(player_count());
  for (int i = 0; i < player_count(); ++i) {
    s.players[i].x = static_cast<int>((state >> (6 * i)) & 7);
    s.players[i].y = static_cast<int>((state >> (6 * i + 3)) & 7);
  }
  s.possessor = static_cast<int>((state >> 24) & 7);
  return s;
}

State SoccerWorld::terminal_state(double reward) {
  return kTerminalBit | (reward > 0 ? 1ull : 0ull);
}

double SoccerWorld::terminal_reward(State state) {
  DGD_CHECK(state & kTerminalBit, "not a terminal state");
  return (state & 1ull) ? 1.0 : -1.0;
}

bool SoccerWorld::terminal(State state) const {
  return (state & kTerminalBit) != 0;
}

int SoccerWorld::teammate(int player) const {
  if (player < kLearnerCount) return player == 0 ? 1 : 0;
  if (opponent_count() == 2)
    return player == kLearnerCount ? kLearnerCount + 1 : kLearnerCount;
  return -1;
}

int SoccerWorld::occupant_at(const Situation& s, Position p) const {
  for (int i = 0; i < player_count(); ++i)
    if (s.players[i] == p) return i;
  return -1;
}

int SoccerWorld::observe(const Situation& s, int learner) const {
  DGD_CHECK(learner >= 0 && learner < kLearnerCount, "not a learner");
  SoccerObservation obs;
  if (s.possessor == learner)
    obs.ball_flag = 0;
  else if (s.possessor < kLearnerCount)
    obs.ball_flag = 1;
  else
    obs.ball_flag = 2;
  const Position& p = s.players[learner];
  for (int k = 0; k < 4; ++k) {
    const Position cell{p.x + kDx[k], p.y + kDy[k]};
    if (cell.x < 0 || cell.x >= kWidth || cell.y < 0 || cell.y >= kHeight)
      obs.neighbors[k] = 1;
    else if (occupant_at(s, cell) >= 0)
      obs.neighbors[k] = 2;
    else
      obs.neighbors[k] = 0;
  }
  return encode_observation(obs);
}

ResetOutcome SoccerWorld::reset(const EpisodeRng& rng) const {
  Situation s;
  s.players.resize(player_count());
  auto placement = rng.at(0, kEnvEntity, Purpose::placement);

  // learners in the right half, opponents in the left, distinct cells
  auto place = [&](int player, int x_base) {
    std::vector<Position> free;
    free.reserve(15);
    for (int x = x_base; x < x_base + 3; ++x)
      for (int y = 0; y < kHeight; ++y) {
        const Position cell{x, y};
        bool taken = false;
        for (int j = 0; j < player; ++j)
          if (s.players[j] == cell) taken = true;
        if (!taken) free.push_back(cell);
      }
    s.players[player] =
        free[placement.uniform_int(static_cast<std::uint32_t>(free.size()))];
  };
  for (int i = 0; i < kLearnerCount; ++i) place(i, 3);
  for (int i = kLearnerCount; i < player_count(); ++i) place(i, 0);

  auto possession = rng.at(0, kEnvEntity, Purpose::possession);
  s.possessor = static_cast<int>(
      possession.uniform_int(static_cast<std::uint32_t>(player_count())));

  ResetOutcome out;
  out.state = encode(s);
  out.observations.resize(kLearnerCount);
  for (int i = 0; i < kLearnerCount; ++i) out.observations[i] = observe(s, i);
  return out;
}

SoccerWorld::StepResult SoccerWorld::apply_actions(
    const Situation& start, std::span<const int> actions,
    std::span<const int> order) const {
  DGD_CHECK(static_cast<int>(actions.size()) == player_count(),
            "one action per player");
  DGD_CHECK(static_cast<int>(order.size()) == player_count(),
            "order must cover every player");
  Situation s = start;
  std::vector<bool> moved(player_count(), false);
  int pending_passer = -1;

  for (int idx : order) {
    const int action = actions[idx];
    DGD_CHECK(action >= 0 && action <= kPass, "action out of range");
    if (action == kStay) continue;
    if (action == kPass) {
      if (s.possessor == idx && teammate(idx) >= 0) pending_passer = idx;
      continue;
    }
    const Position from = s.players[idx];
    const Position target{from.x + kDx[action], from.y + kDy[action]};
    const bool off_grid = target.x < 0 || target.x >= kWidth ||
                          target.y < 0 || target.y >= kHeight;
    if (off_grid) {
      const bool through_goal = (target.x == -1 || target.x == kWidth) &&
                                target.y >= kGoalRowLow &&
                                target.y <= kGoalRowHigh;
      if (s.possessor == idx && through_goal) {
        // left goal: the learners score; right goal: own goal for them
        const double reward = target.x == -1 ? 1.0 : -1.0;
        return {std::move(s), reward, true};
      }
      continue;  // cancelled
    }
    const int occupant = occupant_at(s, target);
    if (occupant >= 0) {
      // possession goes to the stationary player, the move does not occur
      if (s.possessor == idx && !moved[occupant]) s.possessor = occupant;
      continue;
    }
    s.players[idx] = target;
    moved[idx] = true;
  }

  if (pending_passer >= 0 && s.possessor == pending_passer)
    s.possessor = teammate(pending_passer);
  return {std::move(s), 0.0, false};
}

StepOutcome SoccerWorld::step(State state, std::span<const int> actions,
                              std::uint32_t t, const EpisodeRng& rng) const {
  DGD_CHECK(!terminal(state), "step from a terminal state");
  DGD_CHECK(static_cast<int>(actions.size()) == kLearnerCount,
            "one action per learner");
  Situation s = decode(state);

  std::vector<int> all_actions(player_count(), kStay);
  for (int i = 0; i < kLearnerCount; ++i) {
    DGD_CHECK(actions[i] >= 0 && actions[i] < learner_spec_.action_count,
              "learner action out of range");
    all_actions[i] = actions[i];
  }
  for (int k = 0; k < opponent_count(); ++k) {
    const int player = kLearnerCount + k;
    auto stream = rng.at(t, static_cast<std::uint16_t>(player),
                         Purpose::opponent_action);
    all_actions[player] =
        opponent_action(config_.opponents[k], s, player, stream);
  }

  std::vector<int> order(player_count());
  for (int i = 0; i < player_count(); ++i) order[i] = i;
  auto perm_stream = rng.at(t, kEnvEntity, Purpose::move_permutation);
  perm_stream.shuffle(order);

  StepResult result = apply_actions(s, all_actions, order);
  StepOutcome out;
  out.reward = result.reward;
  out.terminal = result.terminal;
  if (result.terminal) {
    out.next_state = terminal_state(result.reward);
  } else {
    out.next_state = encode(result.situation);
    out.observations.resize(kLearnerCount);
    for (int i = 0; i < kLearnerCount; ++i)
      out.observations[i] = observe(result.situation, i);
  }
  return out;
}

int SoccerWorld::step_toward(const Situation& s, int player, Position target,
                             RandomStream& stream) const {
  const Position p = s.players[player];
  const int dx = target.x - p.x;
  const int dy = target.y - p.y;
  if (dx == 0 && dy == 0) return kStay;
  bool along_x;
  if (dy == 0)
    along_x = true;
  else if (dx == 0)
    along_x = false;
  else if (std::abs(dx) != std::abs(dy))
    along_x = std::abs(dx) > std::abs(dy);  // larger gap first
  else
    along_x = stream.uniform_int(2) == 0;
  const int action =
      along_x ? (dx > 0 ? kEast : kWest) : (dy > 0 ? kNorth : kSouth);
  const Position cell{p.x + kDx[action], p.y + kDy[action]};
  if (occupant_at(s, cell) >= 0) return kStay;  // blocked
  return action;
}

int SoccerWorld::opponent_action(OpponentKind kind, const Situation& s,
                                 int player, RandomStream& stream) const {
  const Position p = s.players[player];
  switch (kind) {
    case OpponentKind::random:
      return static_cast<int>(stream.uniform_int(6));

    case OpponentKind::greedy: {
      if (s.possessor == player) {
        // rush the learners' goal on the right
        if (p.x == kWidth - 1 && p.y >= kGoalRowLow && p.y <= kGoalRowHigh)
          return kEast;
        const Position target{kWidth - 1,
                              std::clamp(p.y, kGoalRowLow, kGoalRowHigh)};
        return step_toward(s, player, target, stream);
      }
      const Position target = s.players[s.possessor];
      if (std::abs(target.x - p.x) + std::abs(target.y - p.y) <= 1)
        return kStay;
      return step_toward(s, player, target, stream);
    }

    case OpponentKind::defensive: {
      if (in_goal_area(p)) {
        // stay, or make a move that keeps it inside the goal area
        if (stream.uniform_int(2) == 0) return kStay;
        int moves[4];
        int count = 0;
        for (int a = 0; a < 4; ++a) {
          const Position cell{p.x + kDx[a], p.y + kDy[a]};
          if (in_goal_area(cell)) moves[count++] = a;
        }
        return moves[stream.uniform_int(static_cast<std::uint32_t>(count))];
      }
      const Position target{std::clamp(p.x, 0, 1),
                            std::clamp(p.y, kGoalRowLow, kGoalRowHigh)};
      return step_toward(s, player, target, stream);
    }
  }
  return kStay;
}

}  // namespace dgd
