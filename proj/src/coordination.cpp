#include "dgd/coordination.hpp"

#include "dgd/check.hpp"

namespace dgd {

CoordinationGame::CoordinationGame() {
  specs_[0] = {2, 2};
  specs_[1] = {2, 2};
}

const AgentSpec& CoordinationGame::agent_spec(int agent) const {
  DGD_CHECK(agent == 0 || agent == 1, "agent index out of range");
  return specs_[agent];
}

std::pair<int, double> CoordinationGame::dynamics(int state, int action0,
                                                  int action1) {
  DGD_CHECK(action0 >= 0 && action0 < 2 && action1 >= 0 && action1 < 2,
            "action index out of range");
  switch (state) {
    case kS1:
      return action0 == 0 ? std::pair{kS2, 0.0} : std::pair{kS3, 0.0};
    case kS2:
      return action0 == action1 ? std::pair{kS4, 10.0}
                                : std::pair{kS5, -10.0};
    case kS3:
      return {kS6, 5.0};
    default:
      DGD_CHECK(false, "step from a terminal state");
      return {state, 0.0};
  }
}

int CoordinationGame::observe(int agent, int state) const {
  // Decision-relevant states get their own symbol; everywhere else aliases
  // to a slice whose choices cannot bias the learner (see header note).
  if (agent == 1) return state == kS2 ? 0 : 1;
  return state == kS2 ? 1 : 0;
}

ResetOutcome CoordinationGame::reset(const EpisodeRng&) const {
  // point-mass initial distribution on s1
  return {kS1, {observe(0, kS1), observe(1, kS1)}};
}

StepOutcome CoordinationGame::step(State state, std::span<const int> actions,
                                   std::uint32_t, const EpisodeRng&) const {
  DGD_CHECK(actions.size() == 2, "two actions expected");
  DGD_CHECK(!terminal(state), "step from a terminal state");
  auto [next, r] = dynamics(static_cast<int>(state), actions[0], actions[1]);
  StepOutcome out;
  out.next_state = next;
  out.reward = r;
  out.terminal = terminal(next);
  out.observations = {observe(0, next), observe(1, next)};
  return out;
}

std::vector<std::pair<int, double>> CoordinationGame::initial_states() const {
  return {{kS1, 1.0}};
}

std::vector<std::pair<int, double>> CoordinationGame::transitions(
    int state, std::span<const int> actions) const {
  auto [next, r] = dynamics(state, actions[0], actions[1]);
  (void)r;
  return {{next, 1.0}};
}

double CoordinationGame::reward(int state, std::span<const int> actions) const {
  return dynamics(state, actions[0], actions[1]).second;
}

std::vector<double> CoordinationGame::observation_dist(int agent,
                                                       int state) const {
  std::vector<double> dist(agent_spec(agent).observation_count, 0.0);
  dist[observe(agent, state)] = 1.0;
  return dist;
}

}  // namespace dgd
