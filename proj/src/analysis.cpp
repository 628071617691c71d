#include "dgd/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "dgd/check.hpp"
#include "dgd/coordination.hpp"

namespace dgd {
namespace {

struct Enumerator {
  const ExactGame& game;
  std::span<const Policy* const> policies;
  double gamma;
  int horizon;
  long node_budget;

  int m;
  double value = 0.0;
  double truncated = 0.0;
  long nodes = 0;

  Enumerator(const ExactGame& g, std::span<const Policy* const> p,
             double gamma_, int horizon_, long budget)
      : game(g),
        policies(p),
        gamma(gamma_),
        horizon(horizon_),
        node_budget(budget),
        m(g.agent_count()) {}

  void run() {
    std::vector<std::vector<double>> init_dists(m);
    for (int i = 0; i < m; ++i)
      init_dists[i] = policies[i]->initial_internal_dist();
    for (auto [s0, p0] : game.initial_states()) {
      std::vector<int> internal(m, 0);
      product_over_dists(init_dists, internal, 0, p0, [&](double mass) {
        visit(s0, internal, 1, mass, gamma);
      });
    }
  }

  // iterate over the cartesian product of per-agent distributions,
  // skipping zero-probability branches
  template <typename Fn>
  void product_over_dists(const std::vector<std::vector<double>>& dists,
                          std::vector<int>& out, int i, double mass, Fn fn) {
    if (i == m) {
      fn(mass);
      return;
    }
    const auto& d = dists[i];
    for (std::size_t k = 0; k < d.size(); ++k) {
      if (d[k] == 0.0) continue;
      out[i] = static_cast<int>(k);
      product_over_dists(dists, out, i + 1, mass * d[k], fn);
    }
  }

  void visit(int state, const std::vector<int>& internal, int t, double mass,
             double gamma_pow) {
    if (game.terminal(state)) return;
    if (t > horizon) {
      truncated += mass;
      return;
    }
    if (++nodes > node_budget)
      throw BudgetExceeded("exact_value: enumeration budget exceeded");

    // per-level buffers: the recursion below must not clobber them
    std::vector<int> obs(m), n_next(m), actions(m);

    std::vector<std::vector<double>> obs_dists(m);
    for (int i = 0; i < m; ++i) obs_dists[i] = game.observation_dist(i, state);

    product_over_dists(obs_dists, obs, 0, mass, [&](double mass_o) {
      std::vector<std::vector<double>> trans_dists(m);
      for (int i = 0; i < m; ++i)
        trans_dists[i] =
            policies[i]->internal_transition_dist(internal[i], obs[i]);
      product_over_dists(trans_dists, n_next, 0, mass_o, [&](double mass_n) {
        std::vector<std::vector<double>> act_dists(m);
        for (int i = 0; i < m; ++i)
          act_dists[i] = policies[i]->action_distribution(n_next[i], obs[i]);
        product_over_dists(act_dists, actions, 0, mass_n, [&](double mass_a) {
          value += mass_a * gamma_pow * game.reward(state, actions);
          for (auto [s_next, p_t] : game.transitions(state, actions)) {
            if (p_t == 0.0) continue;
            visit(s_next, n_next, t + 1, mass_a * p_t, gamma_pow * gamma);
          }
        });
      });
    });
  }
};

const char* classification_name(const NashReport& r) {
  if (!r.nash) return "not-nash";
  return r.strict ? "strict-nash" : "nash";
}

}  // namespace

double coordination_value(const PolicyPoint& p, double gamma) {
  const double c = p.p21 * p.p22 + (1.0 - p.p21) * (1.0 - p.p22);
  return gamma * gamma * (p.p11 * (20.0 * c - 10.0) + (1.0 - p.p11) * 5.0);
}

std::array<std::unique_ptr<Policy>, 2> coordination_policies(
    const PolicyPoint& p) {
  // rows follow CoordinationGame::observe; the aliased rows are
  // outcome-irrelevant and left uniform
  auto agent0 = std::make_unique<TabularReactivePolicy>(
      std::vector<std::vector<double>>{{p.p11, 1.0 - p.p11},
                                       {p.p21, 1.0 - p.p21}});
  auto agent1 = std::make_unique<TabularReactivePolicy>(
      std::vector<std::vector<double>>{{p.p22, 1.0 - p.p22}, {0.5, 0.5}});
  return {std::move(agent0), std::move(agent1)};
}

ExactValueResult exact_value_detailed(const ExactGame& game,
                                      std::span<const Policy* const> policies,
                                      double gamma, int horizon,
                                      long node_budget) {
  DGD_CHECK(static_cast<int>(policies.size()) == game.agent_count(),
            "one policy per agent");
  DGD_CHECK(gamma >= 0.0 && gamma < 1.0, "gamma must be in [0,1)");
  Enumerator e(game, policies, gamma, horizon, node_budget);
  e.run();
  return {e.value, e.truncated, e.nodes};
}

double exact_value(const ExactGame& game,
                   std::span<const Policy* const> policies, double gamma,
                   int horizon, long node_budget) {
  return exact_value_detailed(game, policies, gamma, horizon, node_budget)
      .value;
}

std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, double h) {
  DGD_CHECK(h > 0.0, "finite-difference step must be positive");
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double saved = x[k];
    x[k] = saved + h;
    const double up = f(x);
    x[k] = saved - h;
    const double down = f(x);
    x[k] = saved;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

BestResponseReport coordination_best_response(const PolicyPoint& point,
                                              int agent, double gamma,
                                              const BestResponseSearch& opts) {
  const double raw[3] = {point.p11, point.p21, point.p22};
  auto value = [gamma](std::span<const double> x) {
    return coordination_value({x[0], x[1], x[2]}, gamma);
  };
  static constexpr int kAgent0Coords[] = {0, 1};
  static constexpr int kAgent1Coords[] = {2};
  static constexpr std::pair<double, double> kUnit[] = {{0.0, 1.0},
                                                        {0.0, 1.0}};
  std::span<const int> coords =
      agent == 0 ? std::span<const int>(kAgent0Coords)
                 : std::span<const int>(kAgent1Coords);
  return best_response_search(
      value, raw, coords,
      std::span<const std::pair<double, double>>(kUnit).first(coords.size()),
      agent, opts);
}

NashReport coordination_is_nash(const PolicyPoint& point, double gamma,
                                const NashOptions& opts) {
  NashReport report;
  report.nash = true;
  for (int agent = 0; agent < 2; ++agent) {
    report.gaps.push_back(
        coordination_best_response(point, agent, gamma, opts.search));
    if (report.gaps.back().gap > opts.epsilon) report.nash = false;
  }
  if (!report.nash) return report;

  // strict: every feasible unilateral perturbation strictly lowers value
  const double current = coordination_value(point, gamma);
  double raw[3] = {point.p11, point.p21, point.p22};
  report.strict = true;
  for (int k = 0; k < 3 && report.strict; ++k) {
    for (double sign : {-1.0, 1.0}) {
      const double moved = raw[k] + sign * opts.strict_delta;
      if (moved < 0.0 || moved > 1.0) continue;
      const double saved = raw[k];
      raw[k] = moved;
      const double v = coordination_value({raw[0], raw[1], raw[2]}, gamma);
      raw[k] = saved;
      if (!(v < current - 1e-12)) {
        report.strict = false;
        break;
      }
    }
  }
  return report;
}

void write_nash_grid_csv(int grid_n, double gamma, std::ostream& out) {
  DGD_CHECK(grid_n >= 2, "grid must have at least 2 points per axis");
  out << "p1_1,p2_1,p2_2,value,gap_agent1,gap_agent2,classification\n";
  char buf[160];
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      for (int k = 0; k < grid_n; ++k) {
        PolicyPoint p{static_cast<double>(i) / (grid_n - 1),
                      static_cast<double>(j) / (grid_n - 1),
                      static_cast<double>(k) / (grid_n - 1)};
        NashReport r = coordination_is_nash(p, gamma);
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%s\n",
                      p.p11, p.p21, p.p22, coordination_value(p, gamma),
                      r.gaps[0].gap, r.gaps[1].gap, classification_name(r));
        out << buf;
      }
    }
  }
}

double TwoModeSurface::operator()(double w1, double w2) const {
  const double da =
      (w1 - a_pos) * (w1 - a_pos) + (w2 - c) * (w2 - c);
  const double db =
      (w1 - b_pos) * (w1 - b_pos) + (w2 - c) * (w2 - c);
  return a_height * std::exp(-da / width) + b_height * std::exp(-db / width);
}

std::vector<double> gradient_ascent(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, double step, int iterations, double fd_h) {
  std::vector<double> x = std::move(start);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> g = finite_diff_gradient(f, x, fd_h);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += step * g[k];
  }
  return x;
}

}  // namespace dgd
