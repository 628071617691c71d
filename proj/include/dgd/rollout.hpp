#pragma once

#include <span>

#include "dgd/history.hpp"
#include "dgd/policy.hpp"

namespace dgd {

// Samples one episode. Every stochastic choice draws from a stream keyed
// by (episode, step, entity, purpose), so the resulting history does not
// depend on scheduling or on who runs the controllers. Policies with a
// single internal state make no internal choices and leave no internal
// trace entries.
EpisodeHistory rollout(const GameDynamics& dynamics,
                       std::span<const Policy* const> policies, int max_steps,
                       const EpisodeRng& rng);

}  // namespace dgd
