#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "dgd/game.hpp"
#include "dgd/policy.hpp"

namespace dgd {

// The three outcome-relevant probabilities of the coordination game:
// p11 = Pr(agent 1 plays a in s1), p21 = Pr(agent 1 plays a in s2),
// p22 = Pr(agent 2 plays a in s2).
struct PolicyPoint {
  double p11 = 0.0;
  double p21 = 0.0;
  double p22 = 0.0;
};

// Closed-form discounted value of the coordination game:
//   gamma^2 * [ p11 * (20c - 10) + (1 - p11) * 5 ],
// with c = p21*p22 + (1-p21)(1-p22) the probability of matching actions.
// Cross-validated against exact_value by enumeration.
double coordination_value(const PolicyPoint& point, double gamma);

// Tabular policies realizing the point, for rollouts and enumeration.
std::array<std::unique_ptr<Policy>, 2> coordination_policies(
    const PolicyPoint& point);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactValueResult {
  double value = 0.0;
  double truncated_mass = 0.0;  // probability mass alive past the horizon
  long nodes = 0;
};

// Expected discounted value by exhaustive history enumeration, including
// internal-state branches. Throws BudgetExceeded past node_budget nodes.
ExactValueResult exact_value_detailed(const ExactGame& game,
                                      std::span<const Policy* const> policies,
                                      double gamma, int horizon,
                                      long node_budget = 2'000'000);
double exact_value(const ExactGame& game,
                   std::span<const Policy* const> policies, double gamma,
                   int horizon, long node_budget = 2'000'000);

// Central finite differences, one column per coordinate.
std::vector<double> finite_diff_gradient(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> point, double h);

struct BestResponseSearch {
  double grid_step = 1e-3;
  int refine_rounds = 2;       // golden-section passes per coordinate
  double refine_tol = 1e-10;
};

struct BestResponseReport {
  int agent = 0;
  double current_value = 0.0;
  double best_value = 0.0;
  double gap = 0.0;  // best - current, floored at 0
  std::vector<double> best_point;  // full point with the deviation applied
};

// Maximal improvement available to one agent by changing only its own
// coordinates inside its box, others held fixed. Grid scan plus
// golden-section refinement around the best grid point.
template <typename F>
BestResponseReport best_response_search(
    F&& value, std::span<const double> point,
    std::span<const int> agent_coords,
    std::span<const std::pair<double, double>> bounds, int agent,
    const BestResponseSearch& opts = {});

struct NashOptions {
  double epsilon = 1e-9;      // gap tolerance
  double strict_delta = 0.01; // perturbation size for strictness probing
  BestResponseSearch search;
};

struct NashReport {
  bool nash = false;
  bool strict = false;
  std::vector<BestResponseReport> gaps;  // one per agent
};

BestResponseReport coordination_best_response(
    const PolicyPoint& point, int agent, double gamma,
    const BestResponseSearch& opts = {});
NashReport coordination_is_nash(const PolicyPoint& point, double gamma,
                                const NashOptions& opts = {});

// CSV report over an n^3 grid of policy points:
// p11,p21,p22,value,gap_agent1,gap_agent2,classification
void write_nash_grid_csv(int grid_n, double gamma, std::ostream& out);

// Synthetic two-parameter value surface with two separated modes on the
// slice w2 = c, the taller one at (b_pos, c). Gradient ascent started near
// the short mode converges to a stationary point that is not an
// equilibrium: deviating in w1 alone jumps to the taller mode.
struct TwoModeSurface {
  double a_pos = -2.0;
  double b_pos = 2.0;
  double c = 0.0;
  double a_height = 1.0;
  double b_height = 2.0;
  double width = 0.5;

  double operator()(double w1, double w2) const;
};

// Plain fixed-step ascent on central finite differences.
std::vector<double> gradient_ascent(
    const std::function<double(std::span<const double>)>& f,
    std::vector<double> start, double step, int iterations, double fd_h);

// --- implementation ---

template <typename F>
BestResponseReport best_response_search(
    F&& value, std::span<const double> point,
    std::span<const int> agent_coords,
    std::span<const std::pair<double, double>> bounds, int agent,
    const BestResponseSearch& opts) {
  std::vector<double> x(point.begin(), point.end());
  BestResponseReport report;
  report.agent = agent;
  report.current_value = value(std::span<const double>(x));

  const int dims = static_cast<int>(agent_coords.size());
  std::vector<long> steps(dims);
  for (int d = 0; d < dims; ++d) {
    const double width = bounds[d].second - bounds[d].first;
    steps[d] = std::max<long>(1, static_cast<long>(width / opts.grid_step + 0.5));
  }

  std::vector<double> best = x;
  double best_value = report.current_value;
  std::vector<long> idx(dims, 0);
  for (;;) {
    for (int d = 0; d < dims; ++d)
      x[agent_coords[d]] =
          bounds[d].first + (bounds[d].second - bounds[d].first) *
                                static_cast<double>(idx[d]) /
                                static_cast<double>(steps[d]);
    const double v = value(std::span<const double>(x));
    if (v > best_value) {
      best_value = v;
      best = x;
    }
    int d = 0;
    while (d < dims && ++idx[d] > steps[d]) idx[d++] = 0;
    if (d == dims) break;
  }

  // golden-section refinement, coordinate at a time
  constexpr double kInvPhi = 0.6180339887498949;
  x = best;
  for (int round = 0; round < opts.refine_rounds; ++round) {
    for (int d = 0; d < dims; ++d) {
      const int coord = agent_coords[d];
      const double cell =
          (bounds[d].second - bounds[d].first) / static_cast<double>(steps[d]);
      double lo = std::max(bounds[d].first, x[coord] - cell);
      double hi = std::min(bounds[d].second, x[coord] + cell);
      double m1 = hi - kInvPhi * (hi - lo);
      double m2 = lo + kInvPhi * (hi - lo);
      auto eval = [&](double p) {
        x[coord] = p;
        return value(std::span<const double>(x));
      };
      double f1 = eval(m1), f2 = eval(m2);
      while (hi - lo > opts.refine_tol) {
        if (f1 < f2) {
          lo = m1;
          m1 = m2;
          f1 = f2;
          m2 = lo + kInvPhi * (hi - lo);
          f2 = eval(m2);
        } else {
          hi = m2;
          m2 = m1;
          f2 = f1;
          m1 = hi - kInvPhi * (hi - lo);
          f1 = eval(m1);
        }
      }
      const double mid = 0.5 * (lo + hi);
      const double fm = eval(mid);
      if (fm > best_value) {
        best_value = fm;
        best = x;
      } else {
        x = best;
      }
    }
  }

  report.best_value = best_value;
  report.gap = std::max(0.0, best_value - report.current_value);
  report.best_point = std::move(best);
  return report;
}

}  // namespace dgd
