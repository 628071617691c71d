#include "dgd/learner.hpp"

#include <algorithm>
#include <numeric>

#include "dgd/check.hpp"
#include "dgd/kernels.hpp"

namespace dgd {
namespace {

// Walks the traces of `policies` against the shared reward sequence with a
// single eligibility/total pass. `offsets[i]` locates policy i's block in
// the accumulator; the per-agent and joint estimators share this walk (the
// adds on any one weight are identical either way).
void accumulate_traces(GradientAccumulator& acc, const EpisodeHistory& history,
                       std::span<const Policy* const> policies,
                       std::span<const int> agents,
                       std::span<const std::size_t> offsets, double gamma,
                       SumBound bound) {
  std::vector<std::size_t> next(agents.size(), 0);
  double gamma_pow = 1.0;
  for (std::size_t t = 1; t <= history.steps.size(); ++t) {
    gamma_pow *= gamma;
    const std::uint32_t limit =
        bound == SumBound::causal_inclusive ? t : t - 1;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const auto& trace = history.traces.at(agents[i]);
      const std::size_t size = policies[i]->param_count();
      while (next[i] < trace.size() && trace[next[i]].step <= limit) {
        acc.add_score(*policies[i], trace[next[i]], offsets[i], size);
        ++next[i];
      }
    }
    const double r = history.steps[t - 1].reward;
    if (r != 0.0) acc.on_reward(gamma_pow * r);
  }
}

void accumulate_agent(GradientAccumulator& acc, const EpisodeHistory& history,
                      const Policy& policy, int agent, double gamma,
                      SumBound bound) {
  const Policy* policies[] = {&policy};
  const int agents[] = {agent};
  const std::size_t offsets[] = {0};
  accumulate_traces(acc, history, policies, agents, offsets, gamma, bound);
}

LearningCurve train(const GameDynamics& dynamics,
                    std::span<Policy* const> policies,
                    const TrainerConfig& config, const RunRng& rng,
                    bool joint) {
  const int m = dynamics.agent_count();
  DGD_CHECK(static_cast<int>(policies.size()) == m, "one policy per agent");
  DGD_CHECK(config.alpha >= 0.0, "alpha must be non-negative");
  DGD_CHECK(config.gamma >= 0.0 && config.gamma < 1.0, "gamma must be in [0,1)");
  DGD_CHECK(config.trials >= 1, "need at least one trial");

  std::vector<const Policy*> views(policies.begin(), policies.end());
  std::vector<std::size_t> offsets(m + 1, 0);
  for (int i = 0; i < m; ++i)
    offsets[i + 1] = offsets[i] + policies[i]->param_count();
  const std::size_t total_params = offsets[m];

  LearningCurve curve;
  auto checkpoint = [&](long trial) {
    if (config.eval_episodes <= 0) return;
    curve.push_back({trial, evaluate_policies(dynamics, views, trial,
                                              config.eval_episodes,
                                              config.max_steps, rng)});
  };
  auto aligned = [&](long trial) {
    return config.eval_every > 0 && trial % config.eval_every == 0;
  };

  std::vector<GradientAccumulator> per_agent;
  if (!joint)
    for (int i = 0; i < m; ++i)
      per_agent.emplace_back(policies[i]->param_count());
  GradientAccumulator joint_acc(joint ? total_params : 0);
  std::vector<int> agent_ids(m);
  for (int i = 0; i < m; ++i) agent_ids[i] = i;

  std::vector<double> params(total_params);
  for (long trial = 0; trial < config.trials; ++trial) {
    if (trial == 0 || aligned(trial)) checkpoint(trial);

    EpisodeHistory history =
        rollout(dynamics, views, config.max_steps, EpisodeRng(rng, trial, 0));

    if (joint) {
      joint_acc.reset();
      accumulate_traces(joint_acc, history, views, agent_ids,
                        std::span(offsets).first(m), config.gamma,
                        config.sum_bound);
      for (int i = 0; i < m; ++i)
        apply_update(*policies[i],
                     joint_acc.total().subspan(offsets[i],
                                               offsets[i + 1] - offsets[i]),
                     config.alpha, config.weight_clamp);
    } else {
      for (int i = 0; i < m; ++i) {
        GradientAccumulator& acc = per_agent[i];
        acc.reset();
        accumulate_agent(acc, history, *policies[i], i, config.gamma,
                         config.sum_bound);
        apply_update(*policies[i], acc.total(), config.alpha,
                     config.weight_clamp);
      }
    }

    if (config.on_trial) {
      for (int i = 0; i < m; ++i)
        policies[i]->get_params(std::span(params).subspan(
            offsets[i], offsets[i + 1] - offsets[i]));
      config.on_trial(trial + 1, params);
    }
  }
  if (aligned(config.trials)) checkpoint(config.trials);
  return curve;
}

}  // namespace

void GradientAccumulator::on_reward(double discounted_reward) {
  kernels::axpy(discounted_reward, eligibility_, total_);
}

void GradientAccumulator::reset() {
  std::fill(eligibility_.begin(), eligibility_.end(), 0.0);
  std::fill(total_.begin(), total_.end(), 0.0);
}

std::vector<double> episode_gradient(const EpisodeHistory& history,
                                     const Policy& policy, int agent,
                                     double gamma, SumBound bound) {
  GradientAccumulator acc(policy.param_count());
  accumulate_agent(acc, history, policy, agent, gamma, bound);
  return {acc.total().begin(), acc.total().end()};
}

std::vector<double> joint_episode_gradient(
    const EpisodeHistory& history, std::span<const Policy* const> policies,
    double gamma, SumBound bound) {
  std::vector<std::size_t> offsets;
  std::vector<int> agents;
  std::size_t total = 0;
  for (const Policy* p : policies) {
    offsets.push_back(total);
    agents.push_back(static_cast<int>(agents.size()));
    total += p->param_count();
  }
  GradientAccumulator acc(total);
  accumulate_traces(acc, history, policies, agents, offsets, gamma, bound);
  return {acc.total().begin(), acc.total().end()};
}

void apply_update(Policy& policy, std::span<const double> gradient,
                  double alpha, double weight_clamp) {
  DGD_CHECK(static_cast<int>(gradient.size()) == policy.param_count(),
            "gradient length mismatch");
  std::vector<double> params(policy.param_count());
  policy.get_params(params);
  kernels::step_clamped(params, gradient, alpha, weight_clamp);
  policy.set_params(params);
}

double evaluate_policies(const GameDynamics& dynamics,
                         std::span<const Policy* const> policies,
                         long trial, long eval_episodes, int max_steps,
                         const RunRng& rng) {
  DGD_CHECK(eval_episodes >= 1, "need at least one evaluation episode");
  double sum = 0.0;
  for (long j = 0; j < eval_episodes; ++j) {
    EpisodeHistory h =
        rollout(dynamics, policies, max_steps, EpisodeRng(rng, trial, 1 + j));
    sum += h.undiscounted_payoff();
  }
  return sum / static_cast<double>(eval_episodes);
}

LearningCurve dgd_train(const GameDynamics& dynamics,
                        std::span<Policy* const> policies,
                        const TrainerConfig& config, const RunRng& rng) {
  return train(dynamics, policies, config, rng, /*joint=*/false);
}

LearningCurve joint_train(const GameDynamics& dynamics,
                          std::span<Policy* const> policies,
                          const TrainerConfig& config, const RunRng& rng) {
  return train(dynamics, policies, config, rng, /*joint=*/true);
}

}  // namespace dgd
