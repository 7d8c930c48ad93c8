#include "agency/agency_losses.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "agency/errors.hpp"

namespace agency {
namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
}

// num_actions^horizon, or nullopt once it exceeds the cap.
std::optional<std::size_t> sequence_count(std::size_t num_actions, std::size_t horizon,
                                          std::size_t cap) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < horizon; ++i) {
    if (count > cap / num_actions) return std::nullopt;
    count *= num_actions;
  }
  if (count > cap) return std::nullopt;
  return count;
}

}  // namespace

BeliefModel::BeliefModel(std::size_t num_states, std::size_t num_actions,
                         std::vector<double> predicted)
    : num_states_(num_states), num_actions_(num_actions), predicted_(std::move(predicted)) {
  if (num_states_ == 0 || num_actions_ == 0) {
    throw ValidationError("belief needs at least one state and one action");
  }
  if (predicted_.size() != num_states_ * num_actions_ * num_states_) {
    throw DimensionError("belief tensor has " + std::to_string(predicted_.size()) +
                         " entries, expected " +
                         std::to_string(num_states_ * num_actions_ * num_states_));
  }
  for (std::size_t i = 0; i < num_states_ * num_actions_; ++i) {
    double total = 0.0;
    for (std::size_t n = 0; n < num_states_; ++n) {
      const double q = predicted_[i * num_states_ + n];
      if (!std::isfinite(q) || q < 0.0) {
        throw ValidationError("belief has a negative or non-finite entry");
      }
      total += q;
    }
    if (std::abs(total - 1.0) > kStochasticTolerance) {
      throw ValidationError("belief row " + std::to_string(i) + " is not stochastic");
    }
  }
}

BeliefModel BeliefModel::exact(const TabularMdp& mdp) {
  const auto t = mdp.transitions();
  return BeliefModel(mdp.num_states(), mdp.num_actions(),
                     std::vector<double>(t.begin(), t.end()));
}

BeliefModel BeliefModel::uniform(std::size_t num_states, std::size_t num_actions) {
  return BeliefModel(num_states, num_actions,
                     std::vector<double>(num_states * num_actions * num_states,
                                         1.0 / static_cast<double>(num_states)));
}

void BeliefModel::check_shape(const TabularMdp& mdp) const {
  if (num_states_ != mdp.num_states() || num_actions_ != mdp.num_actions()) {
    throw DimensionError("belief shape does not match MDP");
  }
}

ChannelMatrix action_sequence_channel(const TabularMdp& mdp, std::size_t state,
                                      std::size_t horizon, std::size_t enumeration_cap) {
  const std::size_t ns = mdp.num_states();
  const std::size_t na = mdp.num_actions();
  if (state >= ns) throw ValidationError("state index out of range");
  if (horizon == 0) throw ValidationError("empowerment horizon must be at least 1");
  if (!sequence_count(na, horizon, enumeration_cap)) {
    throw ResourceError(std::to_string(na) + "^" + std::to_string(horizon) +
                        " action sequences exceed the enumeration cap of " +
                        std::to_string(enumeration_cap));
  }

  std::vector<double> rows(ns, 0.0);
  rows[state] = 1.0;
  std::size_t count = 1;
  for (std::size_t step = 0; step < horizon; ++step) {
    std::vector<double> next(count * na * ns, 0.0);
    for (std::size_t prefix = 0; prefix < count; ++prefix) {
      const double* dist = rows.data() + prefix * ns;
      for (std::size_t a = 0; a < na; ++a) {
        double* out = next.data() + (prefix * na + a) * ns;
        for (std::size_t s = 0; s < ns; ++s) {
          if (dist[s] == 0.0) continue;
          const auto t = mdp.transition_row(s, a);
          for (std::size_t n = 0; n < ns; ++n) out[n] += dist[s] * t[n];
        }
      }
    }
    rows = std::move(next);
    count *= na;
  }
  return ChannelMatrix(count, ns, std::move(rows));
}

CapacityResult empowerment(const TabularMdp& mdp, std::size_t state, std::size_t horizon,
                           double tol, std::size_t enumeration_cap) {
  return blahut_arimoto(action_sequence_channel(mdp, state, horizon, enumeration_cap), tol);
}

std::vector<CapacityResult> empowerment_all_states(const TabularMdp& mdp,
                                                   std::size_t horizon, double tol,
                                                   std::size_t enumeration_cap) {
  const std::size_t ns = mdp.num_states();
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, ns);

  // Strided partition; each state's result depends only on its own inputs.
  std::vector<std::future<std::vector<CapacityResult>>> parts;
  for (std::size_t w = 0; w < workers; ++w) {
    parts.push_back(std::async(std::launch::async, [&, w] {
      std::vector<CapacityResult> out;
      for (std::size_t s = w; s < ns; s += workers) {
        out.push_back(empowerment(mdp, s, horizon, tol, enumeration_cap));
      }
      return out;
    }));
  }
  std::vector<std::optional<CapacityResult>> slots(ns);
  for (std::size_t w = 0; w < workers; ++w) {
    auto chunk = parts[w].get();
    for (std::size_t i = 0; i < chunk.size(); ++i) slots[w + i * workers] = std::move(chunk[i]);
  }
  std::vector<CapacityResult> result;
  result.reserve(ns);
  for (auto& slot : slots) result.push_back(std::move(*slot));
  return result;
}

namespace {

void check_weights(const AgencyWeights& weights) {
  require_finite(weights.alpha, "alpha");
  require_finite(weights.beta, "beta");
  require_finite(weights.gamma_mesa, "gamma_mesa");
  if (weights.alpha < 0.0 || weights.beta < 0.0) {
    throw ValidationError("alpha and beta must be non-negative");
  }
}

}  // namespace

double agency_objective(const AgencyWeights& weights, double curiosity,
                        double empowerment_value, double mesa) {
  check_weights(weights);
  require_finite(curiosity, "curiosity");
  require_finite(empowerment_value, "empowerment");
  require_finite(mesa, "mesa");
  return weights.alpha * curiosity + weights.beta * (-empowerment_value) +
         weights.gamma_mesa * mesa;
}

RewardTable ideal_agency_reward(const TabularMdp& mdp, const BeliefModel& belief,
                                const AgencyWeights& weights,
                                const std::optional<RewardTable>& mesa_reward,
                                const IdealRewardOptions& options) {
  belief.check_shape(mdp);
  if (mesa_reward) mesa_reward->check_shape(mdp);
  check_weights(weights);
  if (!(options.smoothing > 0.0) || !std::isfinite(options.smoothing)) {
    throw ValidationError("intrinsic reward requires a positive smoothing constant");
  }

  const std::size_t ns = mdp.num_states();
  const std::size_t na = mdp.num_actions();
  std::vector<double> capacity(ns, 0.0);
  if (weights.beta != 0.0) {
    const auto results = empowerment_all_states(mdp, options.horizon, options.tol,
                                                options.enumeration_cap);
    for (std::size_t s = 0; s < ns; ++s) capacity[s] = results[s].capacity_in(options.base);
  }

  const double log_scale = options.base == LogBase::bits ? from_nats(1.0, LogBase::bits) : 1.0;
  std::vector<double> values(ns * na * ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < na; ++a) {
      for (std::size_t n = 0; n < ns; ++n) {
        double r = 0.0;
        if (weights.alpha != 0.0) {
          const double surprise = -std::log(belief(s, a, n) + options.smoothing) * log_scale;
          r += weights.alpha * surprise;
        }
        if (weights.beta != 0.0) {
          r += weights.beta *
               capacity[options.anchor == EmpowermentAnchor::successor ? n : s];
        }
        if (mesa_reward && weights.gamma_mesa != 0.0) {
          r += weights.gamma_mesa * (*mesa_reward)(s, a, n);
        }
        values[(s * na + a) * ns + n] = r;
      }
    }
  }
  return RewardTable(ns, na, std::move(values));
}

}  // namespace agency
