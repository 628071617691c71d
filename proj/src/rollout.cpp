#include "dgd/rollout.hpp"

#include "dgd/check.hpp"

namespace dgd {

EpisodeHistory rollout(const GameDynamics& dynamics,
                       std::span<const Policy* const> policies, int max_steps,
                       const EpisodeRng& rng) {
  const int m = dynamics.agent_count();
  DGD_CHECK(static_cast<int>(policies.size()) == m, "one policy per agent");
  DGD_CHECK(max_steps >= 1, "max_steps must be at least 1");
  for (int i = 0; i < m; ++i) {
    const AgentSpec& spec = dynamics.agent_spec(i);
    DGD_CHECK(policies[i]->action_count() == spec.action_count &&
                  policies[i]->observation_count() == spec.observation_count,
              "policy alphabets do not match the game");
  }

  EpisodeHistory history;
  ResetOutcome start = dynamics.reset(rng);
  history.initial_state = start.state;
  history.traces.resize(m);

  std::vector<int> internal(m, 0);
  for (int i = 0; i < m; ++i) {
    const Policy& p = *policies[i];
    if (p.internal_state_count() > 1) {
      auto dist = p.initial_internal_dist();
      auto stream = rng.at(0, static_cast<std::uint16_t>(i),
                           Purpose::agent_init);
      internal[i] = stream.sample(dist);
      history.traces[i].push_back({ChoiceKind::initial_internal, 0, 0, 0,
                                   internal[i], std::move(dist)});
    }
  }
  history.initial_internal = internal;

  std::vector<int> observations = start.observations;
  State state = start.state;
  std::vector<int> actions(m, 0);

  for (std::uint32_t t = 1; t <= static_cast<std::uint32_t>(max_steps); ++t) {
    HistoryStep step;
    step.env_state = state;
    step.agents.resize(m);
    for (int i = 0; i < m; ++i) {
      const Policy& p = *policies[i];
      const int obs = observations[i];
      const int n_before = internal[i];
      int n_after = n_before;
      if (p.internal_state_count() > 1) {
        auto dist = p.internal_transition_dist(n_before, obs);
        auto stream = rng.at(t, static_cast<std::uint16_t>(i),
                             Purpose::agent_transition);
        n_after = stream.sample(dist);
        history.traces[i].push_back({ChoiceKind::internal_transition, t,
                                     n_before, obs, n_after, std::move(dist)});
      }
      auto dist = p.action_distribution(n_after, obs);
      auto stream =
          rng.at(t, static_cast<std::uint16_t>(i), Purpose::agent_action);
      const int action = stream.sample(dist);
      history.traces[i].push_back(
          {ChoiceKind::action, t, n_after, obs, action, std::move(dist)});
      internal[i] = n_after;
      actions[i] = action;
      step.agents[i] = {n_before, obs, n_after, action};
    }

    StepOutcome outcome = dynamics.step(state, actions, t, rng);
    step.reward = outcome.reward;
    history.steps.push_back(std::move(step));
    state = outcome.next_state;
    observations = outcome.observations;
    if (outcome.terminal) {
      history.reached_terminal = true;
      break;
    }
  }
  history.final_state = state;
  return history;
}

}  // namespace dgd
