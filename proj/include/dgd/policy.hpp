#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dgd/history.hpp"

namespace dgd {

// A stochastic controller with optional finite internal memory. Exposes
// exact distributions (used by both the samplers and the enumeration
// oracles) and, for parameterized policies, a flat weight vector with
// score-function gradients.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual int action_count() const = 0;
  virtual int observation_count() const = 0;
  virtual int internal_state_count() const = 0;

  virtual std::vector<double> initial_internal_dist() const = 0;
  virtual std::vector<double> internal_transition_dist(int n, int obs) const = 0;
  // Distribution over actions given the post-transition internal state and
  // the current observation (reactive policies ignore n, controllers with
  // memory ignore obs).
  virtual std::vector<double> action_distribution(int n, int obs) const = 0;

  virtual int param_count() const { return 0; }
  virtual void get_params(std::span<double> out) const;
  virtual void set_params(std::span<const double> params);
  // Adds d ln Pr(entry.chosen) / dw into grad (length param_count()).
  virtual void accumulate_score(const TraceEntry& entry,
                                std::span<double> grad) const;
  // Human-readable coordinate of one flat weight index.
  virtual std::string layout_label(int index) const;

  virtual std::unique_ptr<Policy> clone() const = 0;
};

// Softmax over a weight slice at temperature theta, with max subtraction.
std::vector<double> softmax(std::span<const double> weights, double theta);

// Boltzmann-encoded reactive table: one weight per (observation, action).
class SoftmaxReactivePolicy : public Policy {
 public:
  SoftmaxReactivePolicy(int observation_count, int action_count,
                        double theta = 1.0);

  int action_count() const override { return action_count_; }
  int observation_count() const override { return observation_count_; }
  int internal_state_count() const override { return 1; }

  std::vector<double> initial_internal_dist() const override { return {1.0}; }
  std::vector<double> internal_transition_dist(int, int) const override {
    return {1.0};
  }
  std::vector<double> action_distribution(int n, int obs) const override;

  int param_count() const override;
  void get_params(std::span<double> out) const override;
  void set_params(std::span<const double> params) override;
  void accumulate_score(const TraceEntry& entry,
                        std::span<double> grad) const override;
  std::string layout_label(int index) const override;
  std::unique_ptr<Policy> clone() const override;

  double theta() const { return theta_; }
  double& weight(int obs, int action);

 private:
  int observation_count_;
  int action_count_;
  double theta_;
  std::vector<double> weights_;  // [obs * A + a]
};

// Finite state controller <N, pi0, eta, psi>, every map Boltzmann-encoded.
// Layout: [ initial (N) | transition (N*O*N, index (n*O + o)*N + n') |
// action (N*A, index n*A + a) ].
class FiniteStateController : public Policy {
 public:
  FiniteStateController(int internal_states, int observation_count,
                        int action_count, double theta = 1.0);

  int action_count() const override { return action_count_; }
  int observation_count() const override { return observation_count_; }
  int internal_state_count() const override { return internal_states_; }

  std::vector<double> initial_internal_dist() const override;
  std::vector<double> internal_transition_dist(int n, int obs) const override;
  std::vector<double> action_distribution(int n, int obs) const override;

  int param_count() const override;
  void get_params(std::span<double> out) const override;
  void set_params(std::span<const double> params) override;
  void accumulate_score(const TraceEntry& entry,
                        std::span<double> grad) const override;
  std::string layout_label(int index) const override;
  std::unique_ptr<Policy> clone() const override;

  double theta() const { return theta_; }
  double& transition_weight(int n, int obs, int n_next);
  double& action_weight(int n, int action);
  double& initial_weight(int n);

 private:
  int internal_states_;
  int observation_count_;
  int action_count_;
  double theta_;
  std::vector<double> initial_w_;
  std::vector<double> transition_w_;
  std::vector<double> action_w_;
};

// Fixed probability tables, no parameters. Used by oracles and tests to
// drive rollouts at an exact policy point.
class TabularReactivePolicy : public Policy {
 public:
  // probs: row per observation, one probability per action.
  explicit TabularReactivePolicy(std::vector<std::vector<double>> probs);

  int action_count() const override;
  int observation_count() const override;
  int internal_state_count() const override { return 1; }

  std::vector<double> initial_internal_dist() const override { return {1.0}; }
  std::vector<double> internal_transition_dist(int, int) const override {
    return {1.0};
  }
  std::vector<double> action_distribution(int n, int obs) const override;
  std::unique_ptr<Policy> clone() const override;

 private:
  std::vector<std::vector<double>> probs_;
};

// Checkpoint text format: one weight per line with its layout coordinate.
void write_params(const Policy& policy, std::ostream& out);
void read_params(Policy& policy, std::istream& in);

}  // namespace dgd
