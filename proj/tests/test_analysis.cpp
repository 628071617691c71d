#include <cmath>

#include "doctest.h"
#include "dgd/analysis.hpp"
#include "dgd/coordination.hpp"

using namespace dgd;

namespace {

std::array<const Policy*, 2> views(
    const std::array<std::unique_ptr<Policy>, 2>& ps) {
  return {ps[0].get(), ps[1].get()};
}

// Boltzmann weights realizing an (almost) deterministic policy point.
std::array<std::unique_ptr<Policy>, 2> boltzmann_point(double w11, double w21,
                                                       double w22) {
  auto a0 = std::make_unique<SoftmaxReactivePolicy>(2, 2, 1.0);
  a0->weight(0, 0) = w11 / 2;
  a0->weight(0, 1) = -w11 / 2;
  a0->weight(1, 0) = w21 / 2;
  a0->weight(1, 1) = -w21 / 2;
  auto a1 = std::make_unique<SoftmaxReactivePolicy>(2, 2, 1.0);
  a1->weight(0, 0) = w22 / 2;
  a1->weight(0, 1) = -w22 / 2;
  return {std::move(a0), std::move(a1)};
}

}  // namespace

TEST_CASE("closed-form coordination values") {
  const double g2 = 0.99 * 0.99;
  CHECK(coordination_value({1, 1, 1}, 0.99) ==
        doctest::Approx(9.801).epsilon(1e-12));
  // the bottom branch pays +5 whatever happens in s2
  for (double q : {0.0, 0.3, 1.0})
    for (double r : {0.1, 0.5, 0.9})
      CHECK(coordination_value({0, q, r}, 0.99) ==
            doctest::Approx(g2 * 5.0).epsilon(1e-12));
  CHECK(coordination_value({1, 0.5, 0.5}, 0.99) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("enumeration agrees with the closed form on a grid") {
  CoordinationGame game;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      for (int k = 0; k <= 20; ++k) {
        const PolicyPoint p{i / 20.0, j / 20.0, k / 20.0};
        auto policies = coordination_policies(p);
        auto raw = views(policies);
        const double enumerated = exact_value(game, raw, 0.99, 2);
        CHECK(std::abs(enumerated - coordination_value(p, 0.99)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("exact_value handles edge cases") {
  CoordinationGame game;
  auto policies = coordination_policies({0.5, 0.5, 0.5});
  auto raw = views(policies);
  // first reward arrives at t = 1 with weight gamma = 0
  CHECK(exact_value(game, raw, 0.0, 2) == 0.0);
  CHECK(exact_value(game, raw, 0.99, 2) ==
        doctest::Approx(0.99 * 0.99 * 2.5).epsilon(1e-12));
  auto detail = exact_value_detailed(game, raw, 0.99, 2);
  CHECK(detail.truncated_mass == doctest::Approx(0.0));
  // horizon 1 leaves the whole tree alive
  detail = exact_value_detailed(game, raw, 0.99, 1);
  CHECK(detail.truncated_mass == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(exact_value(game, raw, 0.99, 2, 2), BudgetExceeded);
}

TEST_CASE("finite differences of the closed form") {
  auto constant = [](std::span<const double>) { return 3.5; };
  const double x0[] = {0.2, 0.4};
  auto grad = finite_diff_gradient(constant, x0, 1e-5);
  CHECK(grad[0] == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(grad[1] == doctest::Approx(0.0).epsilon(1e-9));

  auto value = [](std::span<const double> x) {
    return coordination_value({x[0], x[1], x[2]}, 0.99);
  };
  const double point[] = {0.5, 1.0, 1.0};
  grad = finite_diff_gradient(value, point, 1e-6);
  CHECK(grad[0] ==
        doctest::Approx(0.99 * 0.99 * 5.0).epsilon(1e-6));
}

TEST_CASE("best-response gaps at known points") {
  // both optima are stable
  for (int agent : {0, 1}) {
    CHECK(coordination_best_response({1, 1, 1}, agent, 0.99).gap ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(coordination_best_response({1, 0, 0}, agent, 0.99).gap ==
          doctest::Approx(0.0).epsilon(1e-12));
  }
  // moderately random second agent leaves no profitable deviation
  CHECK(coordination_best_response({0, 0.5, 0.5}, 0, 0.99).gap ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(coordination_best_response({0, 0.5, 0.5}, 1, 0.99).gap ==
        doctest::Approx(0.0).epsilon(1e-12));
  // with p22 = 0.9 the first agent should switch to the top branch
  const auto report = coordination_best_response({0, 1, 0.9}, 0, 0.99);
  CHECK(report.gap == doctest::Approx(0.99 * 0.99 * 3.0).epsilon(1e-9));
}

TEST_CASE("nash classification of the equilibrium sets") {
  // sub-optimal equilibria: bottom branch with p22 in [.25,.75]
  for (double q : {0.0, 0.5, 1.0}) {
    for (double r : {0.25, 0.4, 0.75}) {
      auto report = coordination_is_nash({0, q, r}, 0.99);
      CHECK(report.nash);
      CHECK_FALSE(report.strict);
    }
    CHECK_FALSE(coordination_is_nash({0, q, 0.20}, 0.99).nash);
    CHECK_FALSE(coordination_is_nash({0, q, 0.80}, 0.99).nash);
    // boundary margins
    CHECK(coordination_is_nash({0, q, 0.25 + 0.01}, 0.99).nash);
    CHECK_FALSE(coordination_is_nash({0, q, 0.25 - 0.01}, 0.99).nash);
    CHECK(coordination_is_nash({0, q, 0.75 - 0.01}, 0.99).nash);
    CHECK_FALSE(coordination_is_nash({0, q, 0.75 + 0.01}, 0.99).nash);
  }
  // the two optimal equilibria are strict
  auto opt = coordination_is_nash({1, 1, 1}, 0.99);
  CHECK(opt.nash);
  CHECK(opt.strict);
  opt = coordination_is_nash({1, 0, 0}, 0.99);
  CHECK(opt.nash);
  CHECK(opt.strict);
}

TEST_CASE("stationarity at a clamped optimum in weight space") {
  CoordinationGame game;
  auto policies = boltzmann_point(50.0, 50.0, 50.0);
  auto raw = views(policies);
  std::vector<double> w(8);
  policies[0]->get_params(std::span(w).first(4));
  policies[1]->get_params(std::span(w).subspan(4, 4));
  auto value = [&](std::span<const double> x) {
    auto c0 = policies[0]->clone();
    auto c1 = policies[1]->clone();
    c0->set_params(x.first(4));
    c1->set_params(x.subspan(4, 4));
    const Policy* view[] = {c0.get(), c1.get()};
    return exact_value(game, view, 0.99, 2);
  };
  auto grad = finite_diff_gradient(value, w, 1e-4);
  for (double g : grad) CHECK(std::abs(g) <= 1e-8);
}

TEST_CASE("two-mode surface: a local optimum that is not an equilibrium") {
  TwoModeSurface surface;
  auto f = [&](std::span<const double> x) { return surface(x[0], x[1]); };
  auto end = gradient_ascent(f, {-2.3, 0.3}, 0.2, 400, 1e-5);
  CHECK(end[0] == doctest::Approx(surface.a_pos).epsilon(1e-3));
  CHECK(end[1] == doctest::Approx(surface.c).epsilon(1e-3));

  const int coords[] = {0};
  const std::pair<double, double> box[] = {{-3.0, 3.0}};
  auto report = best_response_search(f, end, coords, box, 0);
  CHECK(report.gap > 0.1);
  CHECK(report.best_point[0] == doctest::Approx(surface.b_pos).epsilon(1e-2));
}
