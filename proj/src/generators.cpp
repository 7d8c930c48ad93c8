#include "agency/generators.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "agency/errors.hpp"
#include "agency/rng.hpp"

namespace agency {
namespace {

std::size_t grid_move(std::size_t state, std::size_t action, std::size_t width,
                      std::size_t height) {
  const std::size_t row = state / width;
  const std::size_t col = state % width;
  switch (static_cast<GridAction>(action)) {
    case GridAction::up: return row == 0 ? state : state - width;
    case GridAction::down: return row + 1 == height ? state : state + width;
    case GridAction::left: return col == 0 ? state : state - 1;
    case GridAction::right: return col + 1 == width ? state : state + 1;
  }
  return state;
}

}  // namespace

TabularMdp make_gridworld(std::size_t width, std::size_t height, double slip,
                          double discount) {
  if (width == 0 || height == 0) {
    throw ValidationError("gridworld dimensions must be positive");
  }
  if (!(slip >= 0.0 && slip < 1.0)) throw ValidationError("slip must lie in [0, 1)");
  constexpr std::size_t num_actions = 4;
  const std::size_t ns = width * height;
  std::vector<double> transition(ns * num_actions * ns, 0.0);
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t a = 0; a < num_actions; ++a) {
      double* row = transition.data() + (s * num_actions + a) * ns;
      row[grid_move(s, a, width, height)] += 1.0 - slip;
      if (slip > 0.0) {
        for (std::size_t m = 0; m < num_actions; ++m) {
          row[grid_move(s, m, width, height)] += slip / num_actions;
        }
      }
    }
  }
  return TabularMdp(ns, num_actions, std::move(transition), discount);
}

TabularMdp make_random_mdp(std::uint64_t seed, std::size_t num_states,
                           std::size_t num_actions, double sparsity, double discount) {
  if (num_states == 0 || num_actions == 0) {
    throw ValidationError("random MDP needs at least one state and one action");
  }
  if (!(sparsity >= 0.0 && sparsity < 1.0)) {
    throw ValidationError("sparsity must lie in [0, 1)");
  }
  SplitMix64 rng(seed);
  const auto zeroed = std::min(
      num_states - 1, static_cast<std::size_t>(sparsity * static_cast<double>(num_states)));

  std::vector<double> transition(num_states * num_actions * num_states, 0.0);
  std::vector<std::size_t> order(num_states);
  for (std::size_t row_index = 0; row_index < num_states * num_actions; ++row_index) {
    double* row = transition.data() + row_index * num_states;
    for (std::size_t n = 0; n < num_states; ++n) row[n] = rng.uniform_positive();
    if (zeroed > 0) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      // Partial Fisher-Yates: the first `zeroed` picks are dropped.
      for (std::size_t i = 0; i < zeroed; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(num_states - i));
        std::swap(order[i], order[j]);
        row[order[i]] = 0.0;
      }
    }
    const double total = std::accumulate(row, row + num_states, 0.0);
    for (std::size_t n = 0; n < num_states; ++n) row[n] /= total;
  }
  return TabularMdp(num_states, num_actions, std::move(transition), discount);
}

RewardTable make_random_reward(std::uint64_t seed, std::size_t num_states,
                               std::size_t num_actions, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("reward range must satisfy lo < hi");
  SplitMix64 rng(seed);
  std::vector<double> values(num_states * num_actions * num_states);
  for (double& v : values) v = rng.uniform(lo, hi);
  return RewardTable(num_states, num_actions, std::move(values));
}

}  // namespace agency
