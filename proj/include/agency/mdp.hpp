#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace agency {

/// Row sums of every stochastic object must be within this of 1.
inline constexpr double kStochasticTolerance = 1e-12;

/// State counts up to this use a dense direct solve in policy evaluation.
inline constexpr std::size_t kDirectSolveLimit = 512;

/// Finite MDP with transition tensor indexed (s, a, s'), stored row-major.
class TabularMdp {
 public:
  TabularMdp(std::size_t num_states, std::size_t num_actions,
             std::vector<double> transition, double discount,
             std::vector<double> initial_dist);

  /// Uniform initial distribution.
  TabularMdp(std::size_t num_states, std::size_t num_actions,
             std::vector<double> transition, double discount);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  double discount() const noexcept { return discount_; }

  std::span<const double> initial_dist() const noexcept { return initial_dist_; }
  std::span<const double> transitions() const noexcept { return transition_; }

  std::span<const double> transition_row(std::size_t s, std::size_t a) const {
    return {transition_.data() + (s * num_actions_ + a) * num_states_, num_states_};
  }

  double transition(std::size_t s, std::size_t a, std::size_t next) const {
    return transition_[(s * num_actions_ + a) * num_states_ + next];
  }

  /// Number of (s, a, s') entries.
  std::size_t table_size() const noexcept { return transition_.size(); }

  TabularMdp with_discount(double discount) const;
  TabularMdp with_initial_dist(std::vector<double> initial_dist) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> transition_;
  double discount_;
  std::vector<double> initial_dist_;
};

/// Reward over (s, a, s') triples, same layout as the transition tensor.
class RewardTable {
 public:
  RewardTable(std::size_t num_states, std::size_t num_actions,
              std::vector<double> values);

  static RewardTable zeros(std::size_t num_states, std::size_t num_actions);
  static RewardTable constant(std::size_t num_states, std::size_t num_actions,
                              double value);
  static RewardTable zeros_like(const TabularMdp& mdp) {
    return zeros(mdp.num_states(), mdp.num_actions());
  }

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  double operator()(std::size_t s, std::size_t a, std::size_t next) const {
    return values_[(s * num_actions_ + a) * num_states_ + next];
  }

  /// Throws DimensionError unless the table matches the MDP's shape.
  void check_shape(const TabularMdp& mdp) const;

  RewardTable scaled(double factor) const;
  RewardTable plus(const RewardTable& other) const;
  RewardTable plus_constant(double offset) const;

  friend bool operator==(const RewardTable&, const RewardTable&) = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> values_;
};

/// Stochastic policy, rows indexed by state.
class Policy {
 public:
  Policy(std::size_t num_states, std::size_t num_actions, std::vector<double> probs);

  static Policy uniform(std::size_t num_states, std::size_t num_actions);
  static Policy deterministic(std::span<const std::size_t> actions,
                              std::size_t num_actions);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::span<const double> probs() const noexcept { return probs_; }

  std::span<const double> row(std::size_t s) const {
    return {probs_.data() + s * num_actions_, num_actions_};
  }
  double operator()(std::size_t s, std::size_t a) const {
    return probs_[s * num_actions_ + a];
  }

  bool is_deterministic() const;
  /// Index of the most probable action per state (lowest index on ties).
  std::vector<std::size_t> argmax_actions() const;

  void check_shape(const TabularMdp& mdp) const;

  friend bool operator==(const Policy&, const Policy&) = default;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> probs_;
};

struct ValueVector {
  std::vector<double> values;

  double operator[](std::size_t s) const { return values[s]; }
  std::size_t size() const noexcept { return values.size(); }
};

struct OptimalSolution {
  ValueVector value;
  Policy policy;
  std::size_t iterations = 0;
};

/// r_pi(s) = sum_a pi(a|s) sum_s' T(s,a,s') R(s,a,s').
std::vector<double> expected_immediate_reward(const TabularMdp& mdp,
                                              const RewardTable& reward,
                                              const Policy& policy);

/// Max-norm of V - (r_pi + discount * P_pi V).
double evaluation_residual(const TabularMdp& mdp, const RewardTable& reward,
                           const Policy& policy, const ValueVector& value);

/// Max-norm of V - max_a Q_V(., a).
double optimality_residual(const TabularMdp& mdp, const RewardTable& reward,
                           const ValueVector& value);

/// V^pi with Bellman residual <= tol. Dense LU up to kDirectSolveLimit
/// states, Jacobi sweeps above.
ValueVector policy_evaluation(const TabularMdp& mdp, const RewardTable& reward,
                              const Policy& policy, double tol);

/// Optimal values and the deterministic greedy policy (lowest action index
/// wins ties). The returned V has optimality residual <= tol.
OptimalSolution value_iteration(const TabularMdp& mdp, const RewardTable& reward,
                                double tol, std::size_t max_iter = 10'000'000);

/// Greedy deterministic policy for a value vector.
Policy greedy_policy(const TabularMdp& mdp, const RewardTable& reward,
                     const ValueVector& value);

/// J(pi) = sum_s initial_dist(s) V^pi(s).
double expected_return(const TabularMdp& mdp, const RewardTable& reward,
                       const Policy& policy, double tol);

/// max_pi J(pi) - min_pi J(pi), both extremes attained by value iteration.
double return_range(const TabularMdp& mdp, const RewardTable& reward, double tol);

}  // namespace agency
