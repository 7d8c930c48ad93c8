#include "agency/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "agency/errors.hpp"

namespace agency {
namespace {

void require_distribution(std::span<const double> row, const std::string& what) {
  double total = 0.0;
  for (double p : row) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ValidationError(what + " has a negative or non-finite entry");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kStochasticTolerance) {
    throw ValidationError(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

std::string triple(std::size_t s, std::size_t a) {
  return "(" + std::to_string(s) + ", " + std::to_string(a) + ")";
}

void require_positive_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw ValidationError("tolerance must be positive and finite");
  }
}

void check_inputs(const TabularMdp& mdp, const RewardTable& reward,
                  const Policy& policy, double tol) {
  reward.check_shape(mdp);
  policy.check_shape(mdp);
  require_positive_tol(tol);
}

// Q(s, a) = sum_s' T(s,a,s') [R(s,a,s') + discount V(s')]
double action_value(const TabularMdp& mdp, const RewardTable& reward,
                    std::span<const double> value, std::size_t s, std::size_t a) {
  const auto row = mdp.transition_row(s, a);
  double q = 0.0;
  for (std::size_t n = 0; n < row.size(); ++n) {
    if (row[n] == 0.0) continue;
    q += row[n] * (reward(s, a, n) + mdp.discount() * value[n]);
  }
  return q;
}

bool is_tied(double candidate, double best) {
  return candidate >= best - 1e-12 * std::max(1.0, std::abs(best));
}

}  // namespace

TabularMdp::TabularMdp(std::size_t num_states, std::size_t num_actions,
                       std::vector<double> transition, double discount,
                       std::vector<double> initial_dist)
    : num_states_(num_states),
      num_actions_(num_actions),
      transition_(std::move(transition)),
      discount_(discount),
      initial_dist_(std::move(initial_dist)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw ValidationError("an MDP needs at least one state and one action");
  }
  if (transition_.size() != num_states_ * num_actions_ * num_states_) {
    throw DimensionError("transition tensor has " + std::to_string(transition_.size()) +
                         " entries, expected " +
                         std::to_string(num_states_ * num_actions_ * num_states_));
  }
  if (initial_dist_.size() != num_states_) {
    throw DimensionError("initial distribution length differs from num_states");
  }
  if (!(discount_ >= 0.0 && discount_ < 1.0)) {
    throw ValidationError("discount must lie in [0, 1)");
  }
  for (std::size_t s = 0; s < num_states_; ++s) {
    for (std::size_t a = 0; a < num_actions_; ++a) {
      require_distribution(transition_row(s, a), "transition row " + triple(s, a));
    }
  }
  require_distribution(initial_dist_, "initial distribution");
}

TabularMdp::TabularMdp(std::size_t num_states, std::size_t num_actions,
                       std::vector<double> transition, double discount)
    : TabularMdp(num_states, num_actions, std::move(transition), discount,
                 std::vector<double>(num_states == 0 ? 0 : num_states,
                                     num_states == 0 ? 0.0 : 1.0 / num_states)) {}

TabularMdp TabularMdp::with_discount(double discount) const {
  return TabularMdp(num_states_, num_actions_, transition_, discount, initial_dist_);
}

TabularMdp TabularMdp::with_initial_dist(std::vector<double> initial_dist) const {
  return TabularMdp(num_states_, num_actions_, transition_, discount_,
                    std::move(initial_dist));
}

RewardTable::RewardTable(std::size_t num_states, std::size_t num_actions,
                         std::vector<double> values)
    : num_states_(num_states), num_actions_(num_actions), values_(std::move(values)) {
  if (values_.size() != num_states_ * num_actions_ * num_states_) {
    throw DimensionError("reward table has " + std::to_string(values_.size()) +
                         " entries, expected " +
                         std::to_string(num_states_ * num_actions_ * num_states_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ValidationError("reward table has a non-finite entry");
  }
}

RewardTable RewardTable::zeros(std::size_t num_states, std::size_t num_actions) {
  return constant(num_states, num_actions, 0.0);
}

RewardTable RewardTable::constant(std::size_t num_states, std::size_t num_actions,
                                  double value) {
  return RewardTable(num_states, num_actions,
                     std::vector<double>(num_states * num_actions * num_states, value));
}

void RewardTable::check_shape(const TabularMdp& mdp) const {
  if (num_states_ != mdp.num_states() || num_actions_ != mdp.num_actions()) {
    throw DimensionError("reward table shape (" + std::to_string(num_states_) + ", " +
                         std::to_string(num_actions_) + ") does not match MDP (" +
                         std::to_string(mdp.num_states()) + ", " +
                         std::to_string(mdp.num_actions()) + ")");
  }
}

RewardTable RewardTable::scaled(double factor) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= factor;
  return RewardTable(num_states_, num_actions_, std::move(out));
}

RewardTable RewardTable::plus(const RewardTable& other) const {
  if (other.num_states_ != num_states_ || other.num_actions_ != num_actions_) {
    throw DimensionError("cannot add reward tables of different shapes");
  }
  std::vector<double> out(values_);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += other.values_[i];
  return RewardTable(num_states_, num_actions_, std::move(out));
}

RewardTable RewardTable::plus_constant(double offset) const {
  std::vector<double> out(values_);
  for (double& v : out) v += offset;
  return RewardTable(num_states_, num_actions_, std::move(out));
}

Policy::Policy(std::size_t num_states, std::size_t num_actions, std::vector<double> probs)
    : num_states_(num_states), num_actions_(num_actions), probs_(std::move(probs)) {
  if (probs_.size() != num_states_ * num_actions_) {
    throw DimensionError("policy has " + std::to_string(probs_.size()) +
                         " entries, expected " +
                         std::to_string(num_states_ * num_actions_));
  }
  for (std::size_t s = 0; s < num_states_; ++s) {
    require_distribution(row(s), "policy row " + std::to_string(s));
  }
}

Policy Policy::uniform(std::size_t num_states, std::size_t num_actions) {
  if (num_actions == 0) throw ValidationError("a policy needs at least one action");
  return Policy(num_states, num_actions,
                std::vector<double>(num_states * num_actions, 1.0 / num_actions));
}

Policy Policy::deterministic(std::span<const std::size_t> actions,
                             std::size_t num_actions) {
  std::vector<double> probs(actions.size() * num_actions, 0.0);
  for (std::size_t s = 0; s < actions.size(); ++s) {
    if (actions[s] >= num_actions) throw ValidationError("action index out of range");
    probs[s * num_actions + actions[s]] = 1.0;
  }
  return Policy(actions.size(), num_actions, std::move(probs));
}

bool Policy::is_deterministic() const {
  return std::all_of(probs_.begin(), probs_.end(),
                     [](double p) { return p == 0.0 || p == 1.0; });
}

std::vector<std::size_t> Policy::argmax_actions() const {
  std::vector<std::size_t> out(num_states_);
  for (std::size_t s = 0; s < num_states_; ++s) {
    const auto r = row(s);
    out[s] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

void Policy::check_shape(const TabularMdp& mdp) const {
  if (num_states_ != mdp.num_states() || num_actions_ != mdp.num_actions()) {
    throw DimensionError("policy shape does not match MDP");
  }
}

std::vector<double> expected_immediate_reward(const TabularMdp& mdp,
                                              const RewardTable& reward,
                                              const Policy& policy) {
  reward.check_shape(mdp);
  policy.check_shape(mdp);
  const std::size_t ns = mdp.num_states();
  std::vector<double> r(ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      const auto row = mdp.transition_row(s, a);
      double ra = 0.0;
      for (std::size_t n = 0; n < ns; ++n) ra += row[n] * reward(s, a, n);
      r[s] += pa * ra;
    }
  }
  return r;
}

namespace {

// P_pi as a dense row-stochastic matrix.
Eigen::MatrixXd policy_transition_matrix(const TabularMdp& mdp, const Policy& policy) {
  const auto ns = static_cast<Eigen::Index>(mdp.num_states());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(ns, ns);
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      const double pa = policy(static_cast<std::size_t>(s), a);
      if (pa == 0.0) continue;
      const auto row = mdp.transition_row(static_cast<std::size_t>(s), a);
      for (Eigen::Index n = 0; n < ns; ++n) p(s, n) += pa * row[static_cast<std::size_t>(n)];
    }
  }
  return p;
}

// One application of the evaluation operator: r_pi + discount * P_pi V.
std::vector<double> evaluation_backup(const TabularMdp& mdp, const Policy& policy,
                                      std::span<const double> r_pi,
                                      std::span<const double> value) {
  const std::size_t ns = mdp.num_states();
  std::vector<double> out(r_pi.begin(), r_pi.end());
  for (std::size_t s = 0; s < ns; ++s) {
    double future = 0.0;
    for (std::size_t a = 0; a < mdp.num_actions(); ++a) {
      const double pa = policy(s, a);
      if (pa == 0.0) continue;
      const auto row = mdp.transition_row(s, a);
      double ev = 0.0;
      for (std::size_t n = 0; n < ns; ++n) ev += row[n] * value[n];
      future += pa * ev;
    }
    out[s] += mdp.discount() * future;
  }
  return out;
}

double max_abs_diff(std::span<const double> x, std::span<const double> y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x[i] - y[i]));
  return worst;
}

}  // namespace

double evaluation_residual(const TabularMdp& mdp, const RewardTable& reward,
                           const Policy& policy, const ValueVector& value) {
  const auto r_pi = expected_immediate_reward(mdp, reward, policy);
  if (value.size() != mdp.num_states()) throw DimensionError("value vector length");
  return max_abs_diff(value.values, evaluation_backup(mdp, policy, r_pi, value.values));
}

double optimality_residual(const TabularMdp& mdp, const RewardTable& reward,
                           const ValueVector& value) {
  reward.check_shape(mdp);
  if (value.size() != mdp.num_states()) throw DimensionError("value vector length");
  double worst = 0.0;
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    double best = action_value(mdp, reward, value.values, s, 0);
    for (std::size_t a = 1; a < mdp.num_actions(); ++a) {
      best = std::max(best, action_value(mdp, reward, value.values, s, a));
    }
    worst = std::max(worst, std::abs(best - value[s]));
  }
  return worst;
}

ValueVector policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const Policy& policy, double tol) {
  check_inputs(mdp, reward, policy, tol);
  const std::size_t ns = mdp.num_states();
  const auto r_pi = expected_immediate_reward(mdp, reward, policy);

  std::vector<double> value(ns, 0.0);
  if (ns <= kDirectSolveLimit) {
    const auto n = static_cast<Eigen::Index>(ns);
    Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) -
                             mdp.discount() * policy_transition_matrix(mdp, policy);
    const Eigen::Map<const Eigen::VectorXd> rhs(r_pi.data(), n);
    Eigen::VectorXd solution = system.partialPivLu().solve(rhs);
    value.assign(solution.data(), solution.data() + n);
  }

  // Sweeps: the whole solve above the direct limit, polishing below it.
  // Gives up once the residual has stalled at the rounding floor.
  double best_residual = std::numeric_limits<double>::infinity();
  std::size_t stalled = 0;
  while (true) {
    auto next = evaluation_backup(mdp, policy, r_pi, value);
    const double residual = max_abs_diff(value, next);
    if (residual <= tol) return ValueVector{std::move(value)};
    if (residual < best_residual) {
      best_residual = residual;
      stalled = 0;
    } else if (++stalled > 100) {
      throw IterationLimitError(
          "policy evaluation stalled above the requested tolerance", residual);
    }
    value = std::move(next);
  }
}

Policy greedy_policy(const TabularMdp& mdp, const RewardTable& reward,
                     const ValueVector& value) {
  reward.check_shape(mdp);
  if (value.size() != mdp.num_states()) throw DimensionError("value vector length");
  const std::size_t na = mdp.num_actions();
  std::vector<std::size_t> actions(mdp.num_states(), 0);
  std::vector<double> q(na);
  for (std::size_t s = 0; s < mdp.num_states(); ++s) {
    for (std::size_t a = 0; a < na; ++a) q[a] = action_value(mdp, reward, value.values, s, a);
    const double best = *std::max_element(q.begin(), q.end());
    for (std::size_t a = 0; a < na; ++a) {
      if (is_tied(q[a], best)) {
        actions[s] = a;
        break;
      }
    }
  }
  return Policy::deterministic(actions, na);
}

OptimalSolution value_iteration(const TabularMdp& mdp, const RewardTable& reward,
                                double tol, std::size_t max_iter) {
  reward.check_shape(mdp);
  require_positive_tol(tol);
  const std::size_t ns = mdp.num_states();
  std::vector<double> value(ns, 0.0);
  std::vector<double> next(ns, 0.0);
  double delta = 0.0;

  for (std::size_t iter = 1; iter <= max_iter; ++iter) {
    for (std::size_t s = 0; s < ns; ++s) {
      double best = action_value(mdp, reward, value, s, 0);
      for (std::size_t a = 1; a < mdp.num_actions(); ++a) {
        best = std::max(best, action_value(mdp, reward, value, s, a));
      }
      next[s] = best;
    }
    delta = max_abs_diff(value, next);
    value.swap(next);
    // Residual of the new iterate is at most discount * delta.
    if (mdp.discount() * delta <= tol) {
      ValueVector v{std::move(value)};
      Policy pi = greedy_policy(mdp, reward, v);
      return OptimalSolution{std::move(v), std::move(pi), iter};
    }
  }
  throw IterationLimitError("value iteration hit the iteration limit",
                            mdp.discount() * delta);
}

double expected_return(const TabularMdp& mdp, const RewardTable& reward,
                       const Policy& policy, double tol) {
  const auto v = policy_evaluation(mdp, reward, policy, tol);
  const auto init = mdp.initial_dist();
  double j = 0.0;
  for (std::size_t s = 0; s < v.size(); ++s) j += init[s] * v[s];
  return j;
}

double return_range(const TabularMdp& mdp, const RewardTable& reward, double tol) {
  const auto best = value_iteration(mdp, reward, tol);
  const auto worst = value_iteration(mdp, reward.scaled(-1.0), tol);
  const double hi = expected_return(mdp, reward, best.policy, tol);
  const double lo = expected_return(mdp, reward, worst.policy, tol);
  return std::max(0.0, hi - lo);
}

}  // namespace agency
