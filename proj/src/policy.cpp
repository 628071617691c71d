#include "dgd/policy.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dgd/check.hpp"
#include "dgd/kernels.hpp"

namespace dgd {
namespace {

// d ln p(chosen) / dw_j = (1[j == chosen] - p_j) / theta on the slice
void slice_score(const TraceEntry& e, double theta, std::span<double> slice) {
  const double inv_theta = 1.0 / theta;
  for (std::size_t j = 0; j < e.probs.size(); ++j)
    slice[j] += ((static_cast<int>(j) == e.chosen ? 1.0 : 0.0) - e.probs[j]) *
                inv_theta;
}

}  // namespace

std::vector<double> softmax(std::span<const double> weights, double theta) {
  const double m = kernels::max_value(weights);
  std::vector<double> out(weights.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    out[i] = std::exp((weights[i] - m) / theta);
    sum += out[i];
  }
  for (double& p : out) p /= sum;
  return out;
}

void Policy::get_params(std::span<double>) const {
  DGD_CHECK(param_count() == 0, "policy must override get_params");
}

void Policy::set_params(std::span<const double> params) {
  if (static_cast<int>(params.size()) != param_count())
    throw std::invalid_argument("parameter vector length mismatch");
}

void Policy::accumulate_score(const TraceEntry&, std::span<double>) const {
  DGD_CHECK(param_count() == 0, "policy must override accumulate_score");
}

std::string Policy::layout_label(int) const { return "fixed"; }

// ---------------------------------------------------------------------------
// SoftmaxReactivePolicy

SoftmaxReactivePolicy::SoftmaxReactivePolicy(int observation_count,
                                             int action_count, double theta)
    : observation_count_(observation_count),
      action_count_(action_count),
      theta_(theta),
      weights_(static_cast<std::size_t>(observation_count) * action_count,
               0.0) {
  DGD_CHECK(observation_count >= 1 && action_count >= 1, "empty alphabet");
  DGD_CHECK(theta > 0.0, "temperature must be positive");
}

std::vector<double> SoftmaxReactivePolicy::action_distribution(int,
                                                               int obs) const {
  DGD_CHECK(obs >= 0 && obs < observation_count_, "observation out of range");
  return softmax(std::span(weights_).subspan(
                     static_cast<std::size_t>(obs) * action_count_,
                     action_count_),
                 theta_);
}

int SoftmaxReactivePolicy::param_count() const {
  return static_cast<int>(weights_.size());
}

void SoftmaxReactivePolicy::get_params(std::span<double> out) const {
  DGD_CHECK(out.size() == weights_.size(), "parameter vector length mismatch");
  std::copy(weights_.begin(), weights_.end(), out.begin());
}

void SoftmaxReactivePolicy::set_params(std::span<const double> params) {
  if (params.size() != weights_.size())
    throw std::invalid_argument("parameter vector length mismatch");
  std::copy(params.begin(), params.end(), weights_.begin());
}

void SoftmaxReactivePolicy::accumulate_score(const TraceEntry& e,
                                             std::span<double> grad) const {
  DGD_CHECK(grad.size() == weights_.size(), "gradient length mismatch");
  if (e.kind != ChoiceKind::action) return;  // no internal choices
  DGD_CHECK(static_cast<int>(e.probs.size()) == action_count_,
            "trace entry does not match this layout");
  slice_score(e, theta_,
              grad.subspan(static_cast<std::size_t>(e.observation) *
                               action_count_,
                           action_count_));
}

std::string SoftmaxReactivePolicy::layout_label(int index) const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "o%d:a%d", index / action_count_,
                index % action_count_);
  return buf;
}

std::unique_ptr<Policy> SoftmaxReactivePolicy::clone() const {
  return std::make_unique<SoftmaxReactivePolicy>(*this);
}

double& SoftmaxReactivePolicy::weight(int obs, int action) {
  return weights_.at(static_cast<std::size_t>(obs) * action_count_ + action);
}

// ---------------------------------------------------------------------------
// FiniteStateController

FiniteStateController::FiniteStateController(int internal_states,
                                             int observation_count,
                                             int action_count, double theta)
    : internal_states_(internal_states),
      observation_count_(observation_count),
      action_count_(action_count),
      theta_(theta),
      initial_w_(internal_states, 0.0),
      transition_w_(static_cast<std::size_t>(internal_states) *
                        observation_count * internal_states,
                    0.0),
      action_w_(static_cast<std::size_t>(internal_states) * action_count,
                0.0) {
  DGD_CHECK(internal_states >= 1, "need at least one internal state");
  DGD_CHECK(observation_count >= 1 && action_count >= 1, "empty alphabet");
  DGD_CHECK(theta > 0.0, "temperature must be positive");
}

std::vector<double> FiniteStateController::initial_internal_dist() const {
  return softmax(initial_w_, theta_);
}

std::vector<double> FiniteStateController::internal_transition_dist(
    int n, int obs) const {
  DGD_CHECK(n >= 0 && n < internal_states_, "internal state out of range");
  DGD_CHECK(obs >= 0 && obs < observation_count_, "observation out of range");
  const std::size_t base =
      (static_cast<std::size_t>(n) * observation_count_ + obs) *
      internal_states_;
  return softmax(std::span(transition_w_).subspan(base, internal_states_),
                 theta_);
}

std::vector<double> FiniteStateController::action_distribution(int n,
                                                               int) const {
  DGD_CHECK(n >= 0 && n < internal_states_, "internal state out of range");
  return softmax(std::span(action_w_).subspan(
                     static_cast<std::size_t>(n) * action_count_,
                     action_count_),
                 theta_);
}

int FiniteStateController::param_count() const {
  return static_cast<int>(initial_w_.size() + transition_w_.size() +
                          action_w_.size());
}

void FiniteStateController::get_params(std::span<double> out) const {
  DGD_CHECK(static_cast<int>(out.size()) == param_count(),
            "parameter vector length mismatch");
  auto it = out.begin();
  it = std::copy(initial_w_.begin(), initial_w_.end(), it);
  it = std::copy(transition_w_.begin(), transition_w_.end(), it);
  std::copy(action_w_.begin(), action_w_.end(), it);
}

void FiniteStateController::set_params(std::span<const double> params) {
  if (static_cast<int>(params.size()) != param_count())
    throw std::invalid_argument("parameter vector length mismatch");
  auto it = params.begin();
  std::copy(it, it + initial_w_.size(), initial_w_.begin());
  it += initial_w_.size();
  std::copy(it, it + transition_w_.size(), transition_w_.begin());
  it += transition_w_.size();
  std::copy(it, it + action_w_.size(), action_w_.begin());
}

void FiniteStateController::accumulate_score(const TraceEntry& e,
                                             std::span<double> grad) const {
  DGD_CHECK(static_cast<int>(grad.size()) == param_count(),
            "gradient length mismatch");
  switch (e.kind) {
    case ChoiceKind::initial_internal: {
      DGD_CHECK(static_cast<int>(e.probs.size()) == internal_states_,
                "trace entry does not match this layout");
      slice_score(e, theta_, grad.subspan(0, internal_states_));
      break;
    }
    case ChoiceKind::internal_transition: {
      DGD_CHECK(static_cast<int>(e.probs.size()) == internal_states_,
                "trace entry does not match this layout");
      const std::size_t base =
          initial_w_.size() +
          (static_cast<std::size_t>(e.internal_state) * observation_count_ +
           e.observation) *
              internal_states_;
      slice_score(e, theta_, grad.subspan(base, internal_states_));
      break;
    }
    case ChoiceKind::action: {
      DGD_CHECK(static_cast<int>(e.probs.size()) == action_count_,
                "trace entry does not match this layout");
      const std::size_t base =
          initial_w_.size() + transition_w_.size() +
          static_cast<std::size_t>(e.internal_state) * action_count_;
      slice_score(e, theta_, grad.subspan(base, action_count_));
      break;
    }
  }
}

std::string FiniteStateController::layout_label(int index) const {
  char buf[48];
  int i = index;
  if (i < internal_states_) {
    std::snprintf(buf, sizeof(buf), "init:n%d", i);
    return buf;
  }
  i -= internal_states_;
  const int trans = static_cast<int>(transition_w_.size());
  if (i < trans) {
    const int n_next = i % internal_states_;
    const int rest = i / internal_states_;
    std::snprintf(buf, sizeof(buf), "trans:n%d:o%d:n%d",
                  rest / observation_count_, rest % observation_count_,
                  n_next);
    return buf;
  }
  i -= trans;
  std::snprintf(buf, sizeof(buf), "act:n%d:a%d", i / action_count_,
                i % action_count_);
  return buf;
}

std::unique_ptr<Policy> FiniteStateController::clone() const {
  return std::make_unique<FiniteStateController>(*this);
}

double& FiniteStateController::transition_weight(int n, int obs, int n_next) {
  return transition_w_.at(
      (static_cast<std::size_t>(n) * observation_count_ + obs) *
          internal_states_ +
      n_next);
}

double& FiniteStateController::action_weight(int n, int action) {
  return action_w_.at(static_cast<std::size_t>(n) * action_count_ + action);
}

double& FiniteStateController::initial_weight(int n) {
  return initial_w_.at(n);
}

// ---------------------------------------------------------------------------
// TabularReactivePolicy

TabularReactivePolicy::TabularReactivePolicy(
    std::vector<std::vector<double>> probs)
    : probs_(std::move(probs)) {
  DGD_CHECK(!probs_.empty(), "need at least one observation row");
  for (const auto& row : probs_) {
    DGD_CHECK(row.size() == probs_[0].size(), "ragged probability table");
    double sum = 0.0;
    for (double p : row) {
      DGD_CHECK(p >= 0.0, "negative probability");
      sum += p;
    }
    DGD_CHECK(std::abs(sum - 1.0) <= 1e-12, "row does not sum to 1");
  }
}

int TabularReactivePolicy::action_count() const {
  return static_cast<int>(probs_[0].size());
}

int TabularReactivePolicy::observation_count() const {
  return static_cast<int>(probs_.size());
}

std::vector<double> TabularReactivePolicy::action_distribution(int,
                                                               int obs) const {
  return probs_.at(obs);
}

std::unique_ptr<Policy> TabularReactivePolicy::clone() const {
  return std::make_unique<TabularReactivePolicy>(*this);
}

// ---------------------------------------------------------------------------
// Parameter checkpoint text format

void write_params(const Policy& policy, std::ostream& out) {
  const int m = policy.param_count();
  std::vector<double> params(m);
  policy.get_params(params);
  char buf[64];
  for (int i = 0; i < m; ++i) {
    std::snprintf(buf, sizeof(buf), " %.17g\n", params[i]);
    out << i << ' ' << policy.layout_label(i) << buf;
  }
}

void read_params(Policy& policy, std::istream& in) {
  const int m = policy.param_count();
  std::vector<double> params(m);
  std::string line;
  int count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int index;
    std::string label;
    double value;
    if (!(ls >> index >> label >> value))
      throw std::runtime_error("malformed parameter line: " + line);
    if (index < 0 || index >= m)
      throw std::runtime_error("parameter index out of range: " + line);
    params[index] = value;
    ++count;
  }
  if (count != m) throw std::runtime_error("parameter count mismatch");
  policy.set_params(params);
}

}  // namespace dgd
