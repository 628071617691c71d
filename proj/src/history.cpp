#include "dgd/history.hpp"

#include <cstdio>
#include <ostream>

#include "dgd/check.hpp"

namespace dgd {

double EpisodeHistory::undiscounted_payoff() const {
  double total = 0.0;
  for (const auto& s : steps) total += s.reward;
  return total;
}

double EpisodeHistory::discounted_return(double gamma) const {
  // first reward carries weight gamma^1
  double total = 0.0;
  double w = 1.0;
  for (const auto& s : steps) {
    w *= gamma;
    total += w * s.reward;
  }
  return total;
}

AgentHistory project(const EpisodeHistory& history, int agent) {
  AgentHistory out;
  out.initial_internal = history.initial_internal.at(agent);
  out.steps.reserve(history.steps.size());
  for (const auto& s : history.steps) {
    const auto& a = s.agents.at(agent);
    out.steps.push_back({a.observation, a.internal_after, a.action, s.reward});
  }
  return out;
}

ObservedJointHistory observed_content(const EpisodeHistory& history) {
  ObservedJointHistory out;
  out.initial_internal = history.initial_internal;
  out.steps.reserve(history.steps.size());
  for (const auto& s : history.steps) {
    ObservedJointHistory::Step step;
    step.reward = s.reward;
    for (const auto& a : s.agents) {
      step.observations.push_back(a.observation);
      step.internal_after.push_back(a.internal_after);
      step.actions.push_back(a.action);
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

ObservedJointHistory reconstruct_joint(std::span<const AgentHistory> parts) {
  DGD_CHECK(!parts.empty(), "need at least one agent history");
  const std::size_t len = parts[0].steps.size();
  ObservedJointHistory out;
  for (const auto& p : parts) {
    DGD_CHECK(p.steps.size() == len, "agent histories disagree on length");
    out.initial_internal.push_back(p.initial_internal);
  }
  for (std::size_t t = 0; t < len; ++t) {
    ObservedJointHistory::Step step;
    step.reward = parts[0].steps[t].reward;
    for (const auto& p : parts) {
      DGD_CHECK(p.steps[t].reward == step.reward,
                "agent histories disagree on the shared reward");
      step.observations.push_back(p.steps[t].observation);
      step.internal_after.push_back(p.steps[t].internal_after);
      step.actions.push_back(p.steps[t].action);
    }
    out.steps.push_back(std::move(step));
  }
  return out;
}

void write_history(const EpisodeHistory& history, std::ostream& out) {
  char buf[64];
  out << "init " << history.initial_state;
  for (int n : history.initial_internal) out << ' ' << n;
  out << '\n';
  for (const auto& s : history.steps) {
    out << "step " << s.env_state;
    for (const auto& a : s.agents)
      out << ' ' << a.internal_before << ' ' << a.observation << ' '
          << a.internal_after << ' ' << a.action;
    std::snprintf(buf, sizeof(buf), " %.17g", s.reward);
    out << buf << '\n';
  }
  out << "final " << history.final_state << ' '
      << (history.reached_terminal ? 1 : 0) << '\n';
}

}  // namespace dgd
