#include "dgd/game.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dgd {
namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument("invalid game: " + what);
}

void check_dist(std::span<const double> dist, const std::string& what) {
  double sum = 0.0;
  for (double p : dist) {
    require(std::isfinite(p) && p >= 0.0, what + " has a bad entry");
    sum += p;
  }
  require(std::abs(sum - 1.0) <= 1e-12, what + " does not sum to 1");
}

}  // namespace

void validate_exact_game(const ExactGame& game) {
  require(game.agent_count() >= 1, "no agents");
  require(game.state_count() >= 1, "no states");
  for (int i = 0; i < game.agent_count(); ++i) {
    const AgentSpec& spec = game.agent_spec(i);
    require(spec.action_count >= 1, "agent with empty action alphabet");
    require(spec.observation_count >= 1,
            "agent with empty observation alphabet");
  }
  std::vector<std::pair<int, double>> init = game.initial_states();
  double init_sum = 0.0;
  for (auto [s, p] : init) {
    require(s >= 0 && s < game.state_count(), "initial state out of range");
    require(p >= 0.0, "negative initial probability");
    init_sum += p;
  }
  require(std::abs(init_sum - 1.0) <= 1e-12,
          "initial distribution does not sum to 1");
  for (int s = 0; s < game.state_count(); ++s) {
    for (int i = 0; i < game.agent_count(); ++i) {
      std::vector<double> obs = game.observation_dist(i, s);
      require(static_cast<int>(obs.size()) ==
                  game.agent_spec(i).observation_count,
              "observation distribution has the wrong length");
      check_dist(obs, "observation distribution");
    }
  }
}

}  // namespace dgd
