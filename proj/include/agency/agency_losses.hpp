#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "agency/information.hpp"
#include "agency/mdp.hpp"

namespace agency {

inline constexpr std::size_t kDefaultEnumerationCap = 4096;
inline constexpr double kDefaultSmoothing = 1e-9;

/// Coefficients of A = alpha * curiosity + beta * (-empowerment) + gamma_mesa * mesa.
struct AgencyWeights {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma_mesa = 0.0;
};

/// The agent's predicted next-state distributions q(. | s, a).
class BeliefModel {
 public:
  BeliefModel(std::size_t num_states, std::size_t num_actions,
              std::vector<double> predicted);

  /// A belief that matches the MDP's true dynamics.
  static BeliefModel exact(const TabularMdp& mdp);
  static BeliefModel uniform(std::size_t num_states, std::size_t num_actions);

  std::size_t num_states() const noexcept { return num_states_; }
  std::size_t num_actions() const noexcept { return num_actions_; }
  std::span<const double> predicted() const noexcept { return predicted_; }

  double operator()(std::size_t s, std::size_t a, std::size_t next) const {
    return predicted_[(s * num_actions_ + a) * num_states_ + next];
  }

  void check_shape(const TabularMdp& mdp) const;

 private:
  std::size_t num_states_;
  std::size_t num_actions_;
  std::vector<double> predicted_;
};

/// The n-step channel from every action sequence (lexicographic, first action
/// most significant) to the resulting state distribution.
ChannelMatrix action_sequence_channel(const TabularMdp& mdp, std::size_t state,
                                      std::size_t horizon,
                                      std::size_t enumeration_cap = kDefaultEnumerationCap);

/// Capacity of the horizon-step action channel from `state`. Exact: throws
/// ResourceError rather than sampling when num_actions^horizon exceeds the cap.
CapacityResult empowerment(const TabularMdp& mdp, std::size_t state, std::size_t horizon,
                           double tol,
                           std::size_t enumeration_cap = kDefaultEnumerationCap);

/// Empowerment of every state, in state order.
std::vector<CapacityResult> empowerment_all_states(
    const TabularMdp& mdp, std::size_t horizon, double tol,
    std::size_t enumeration_cap = kDefaultEnumerationCap);

double agency_objective(const AgencyWeights& weights, double curiosity,
                        double empowerment_value, double mesa);

/// Where the empowerment term of the intrinsic reward is evaluated.
enum class EmpowermentAnchor { successor, source };

struct IdealRewardOptions {
  std::size_t horizon = 1;
  double smoothing = kDefaultSmoothing;
  double tol = 1e-9;
  LogBase base = LogBase::nats;
  EmpowermentAnchor anchor = EmpowermentAnchor::successor;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

/// R_A(s,a,s') = alpha * -log(q(s'|s,a) + smoothing)
///             + beta * empowerment(anchor state)
///             + gamma_mesa * mesa(s,a,s').
RewardTable ideal_agency_reward(const TabularMdp& mdp, const BeliefModel& belief,
                                const AgencyWeights& weights,
                                const std::optional<RewardTable>& mesa_reward,
                                const IdealRewardOptions& options = {});

}  // namespace agency
