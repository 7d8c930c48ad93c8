#include "agency/starc.hpp"

#include <cmath>
#include <string>

#include "agency/errors.hpp"
#include "agency/rng.hpp"

namespace agency {

std::string_view to_string(Normalizer n) {
  switch (n) {
    case Normalizer::l1: return "L1";
    case Normalizer::l2: return "L2";
    case Normalizer::return_range: return "return_range";
  }
  return "?";
}

std::string_view to_string(DistanceKind d) { return d == DistanceKind::l1 ? "L1" : "L2"; }

std::string_view to_string(Weighting w) {
  return w == Weighting::unweighted ? "unweighted" : "transition_weighted";
}

Normalizer parse_normalizer(std::string_view text) {
  if (text == "L1" || text == "l1") return Normalizer::l1;
  if (text == "L2" || text == "l2") return Normalizer::l2;
  if (text == "return_range") return Normalizer::return_range;
  throw ValidationError("unknown normalizer '" + std::string(text) + "'");
}

DistanceKind parse_distance_kind(std::string_view text) {
  if (text == "L1" || text == "l1") return DistanceKind::l1;
  if (text == "L2" || text == "l2") return DistanceKind::l2;
  throw ValidationError("unknown distance '" + std::string(text) + "'");
}

Weighting parse_weighting(std::string_view text) {
  if (text == "unweighted") return Weighting::unweighted;
  if (text == "transition_weighted") return Weighting::transition_weighted;
  throw ValidationError("unknown weighting '" + std::string(text) + "'");
}

void StarcConfig::validate() const {
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw ValidationError("STARC tolerance must be positive");
  }
}

PotentialFunction make_random_potential(std::uint64_t seed, std::size_t num_states,
                                        double scale) {
  SplitMix64 rng(seed);
  PotentialFunction out{std::vector<double>(num_states)};
  for (double& v : out.phi) v = rng.uniform(-scale, scale);
  return out;
}

RewardTable canonicalize(const RewardTable& reward, const TabularMdp& mdp,
                         const StarcConfig& config) {
  config.validate();
  reward.check_shape(mdp);
  const std::size_t ns = mdp.num_states();
  const std::size_t na = mdp.num_actions();
  const Policy policy = config.canonical_policy ? *config.canonical_policy
                                                : Policy::uniform(ns, na);
  const auto v = policy_evaluation(mdp, reward, policy, config.tol);
  const double discount = mdp.discount();

  std::vector<double> values(reward.size());
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      const auto row = mdp.transition_row(s, a);
      double expectation = 0.0;
      for (std::size_t n = 0; n < ns; ++n) {
        if (row[n] == 0.0) continue;
        expectation += row[n] * (reward(s, a, n) - v[s] + discount * v[n]);
      }
      double* out = values.data() + (s * na + a) * ns;
      for (std::size_t n = 0; n < ns; ++n) out[n] = expectation;
    }
  }
  return RewardTable(ns, na, std::move(values));
}

RewardTable apply_potential_shaping(const RewardTable& reward, const PotentialFunction& phi,
                                    const TabularMdp& mdp) {
  reward.check_shape(mdp);
  const std::size_t ns = mdp.num_states();
  const std::size_t na = mdp.num_actions();
  if (phi.phi.size() != ns) throw DimensionError("potential length differs from num_states");
  for (double p : phi.phi) {
    if (!std::isfinite(p)) throw ValidationError("potential has a non-finite entry");
  }
  const double discount = mdp.discount();
  std::vector<double> values(reward.values().begin(), reward.values().end());
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t n = 0; n < ns; ++n) {
        values[(s * na + a) * ns + n] += discount * phi.phi[n] - phi.phi[s];
      }
    }
  }
  return RewardTable(ns, na, std::move(values));
}

double table_norm(const RewardTable& table, const TabularMdp& mdp, DistanceKind kind,
                  Weighting weighting) {
  table.check_shape(mdp);
  const auto values = table.values();
  const auto weights = mdp.transitions();
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = weighting == Weighting::transition_weighted ? weights[i] : 1.0;
    if (w == 0.0) continue;
    acc += kind == DistanceKind::l1 ? w * std::abs(values[i]) : w * values[i] * values[i];
  }
  return kind == DistanceKind::l1 ? acc : std::sqrt(acc);
}

double reward_norm(const RewardTable& reward, const TabularMdp& mdp,
                   const StarcConfig& config) {
  switch (config.normalizer) {
    case Normalizer::l1: return table_norm(reward, mdp, DistanceKind::l1, config.weighting);
    case Normalizer::l2: return table_norm(reward, mdp, DistanceKind::l2, config.weighting);
    case Normalizer::return_range: return return_range(mdp, reward, config.tol);
  }
  return 0.0;
}

StandardizedReward standardize(const RewardTable& reward, const TabularMdp& mdp,
                               const StarcConfig& config) {
  const RewardTable canonical = canonicalize(reward, mdp, config);
  const double norm = reward_norm(canonical, mdp, config);
  if (norm <= config.tol) {
    return StandardizedReward{RewardTable::zeros_like(mdp), norm, true};
  }
  return StandardizedReward{canonical.scaled(1.0 / norm), norm, false};
}

StarcReport starc_report(const RewardTable& reward_f, const RewardTable& reward_a,
                         const TabularMdp& mdp, const StarcConfig& config) {
  const auto sf = standardize(reward_f, mdp, config);
  const auto sa = standardize(reward_a, mdp, config);
  const RewardTable diff = sf.values.plus(sa.values.scaled(-1.0));

  StarcReport report;
  report.distance = table_norm(diff, mdp, config.distance, config.weighting);
  report.normalizer = config.normalizer;
  report.distance_kind = config.distance;
  report.weighting = config.weighting;
  report.uniform_canonical_policy = !config.canonical_policy.has_value();
  report.trivial_f = sf.trivial;
  report.trivial_a = sa.trivial;
  report.norm_f = sf.norm_used;
  report.norm_a = sa.norm_used;
  report.config_tol = config.tol;
  return report;
}

double starc_distance(const RewardTable& reward_f, const RewardTable& reward_a,
                      const TabularMdp& mdp, const StarcConfig& config) {
  return starc_report(reward_f, reward_a, mdp, config).distance;
}

double agency_metric(const RewardTable& candidate, const TabularMdp& mdp,
                     const BeliefModel& belief, const AgencyWeights& weights,
                     const IdealRewardOptions& reward_options, const StarcConfig& config,
                     const std::optional<RewardTable>& mesa_reward) {
  const RewardTable ideal =
      ideal_agency_reward(mdp, belief, weights, mesa_reward, reward_options);
  return starc_distance(candidate, ideal, mdp, config);
}

}  // namespace agency
