#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "agency/agency_losses.hpp"
#include "agency/mdp.hpp"

namespace agency {

enum class Normalizer { l1, l2, return_range };
enum class DistanceKind { l1, l2 };
enum class Weighting { unweighted, transition_weighted };

std::string_view to_string(Normalizer n);
std::string_view to_string(DistanceKind d);
std::string_view to_string(Weighting w);
Normalizer parse_normalizer(std::string_view text);
DistanceKind parse_distance_kind(std::string_view text);
Weighting parse_weighting(std::string_view text);

struct StarcConfig {
  /// Policy whose value function canonicalizes; uniform random when empty.
  std::optional<Policy> canonical_policy;
  Normalizer normalizer = Normalizer::l2;
  DistanceKind distance = DistanceKind::l2;
  Weighting weighting = Weighting::transition_weighted;
  double tol = 1e-10;

  void validate() const;
};

struct StandardizedReward {
  RewardTable values;
  double norm_used = 0.0;
  bool trivial = false;
};

struct PotentialFunction {
  std::vector<double> phi;
};

PotentialFunction make_random_potential(std::uint64_t seed, std::size_t num_states,
                                        double scale = 1.0);

/// c(R)(s,a,s') = E_{S'~T(s,a)}[R(s,a,S') - V(s) + discount V(S')] with V the
/// value of the canonical policy. The expectation integrates S' out, so the
/// result is constant in s' for each (s, a).
RewardTable canonicalize(const RewardTable& reward, const TabularMdp& mdp,
                         const StarcConfig& config = {});

/// R + discount * phi(s') - phi(s).
RewardTable apply_potential_shaping(const RewardTable& reward, const PotentialFunction& phi,
                                    const TabularMdp& mdp);

/// Weighted L1/L2 norm of a table; transition weighting gives (s,a,s') the
/// weight T(s,a,s'), so unreachable entries do not count.
double table_norm(const RewardTable& table, const TabularMdp& mdp, DistanceKind kind,
                  Weighting weighting);

/// n(R) under the configured normalizer.
double reward_norm(const RewardTable& reward, const TabularMdp& mdp,
                   const StarcConfig& config);

/// s(R) = c(R) / n(c(R)); the zero table (flagged trivial) when n(c(R)) <= tol.
StandardizedReward standardize(const RewardTable& reward, const TabularMdp& mdp,
                               const StarcConfig& config = {});

struct StarcReport {
  double distance = 0.0;
  Normalizer normalizer = Normalizer::l2;
  DistanceKind distance_kind = DistanceKind::l2;
  Weighting weighting = Weighting::transition_weighted;
  bool uniform_canonical_policy = true;
  bool trivial_f = false;
  bool trivial_a = false;
  double norm_f = 0.0;
  double norm_a = 0.0;
  double config_tol = 0.0;
};

/// Pseudometric between the standardized forms of two rewards.
StarcReport starc_report(const RewardTable& reward_f, const RewardTable& reward_a,
                         const TabularMdp& mdp, const StarcConfig& config = {});

double starc_distance(const RewardTable& reward_f, const RewardTable& reward_a,
                      const TabularMdp& mdp, const StarcConfig& config = {});

/// Distance from `candidate` to the intrinsic agency reward R_A. Lower is
/// more agentic.
double agency_metric(const RewardTable& candidate, const TabularMdp& mdp,
                     const BeliefModel& belief, const AgencyWeights& weights,
                     const IdealRewardOptions& reward_options,
                     const StarcConfig& config = {},
                     const std::optional<RewardTable>& mesa_reward = std::nullopt);

}  // namespace agency
