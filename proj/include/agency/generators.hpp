#pragma once

#include <cstddef>
#include <cstdint>

#include "agency/mdp.hpp"

namespace agency {

inline constexpr double kDefaultDiscount = 0.9;

/// Gridworld action order.
enum class GridAction : std::size_t { up = 0, down = 1, left = 2, right = 3 };

/// Cell (row, col) is state row * width + col. Moves into walls stay put.
/// With probability `slip` the executed move is a uniform draw over all four.
TabularMdp make_gridworld(std::size_t width, std::size_t height, double slip,
                          double discount = kDefaultDiscount);

/// Seeded random MDP. Each transition row zeroes floor(sparsity * num_states)
/// entries (keeping at least one) before normalizing.
TabularMdp make_random_mdp(std::uint64_t seed, std::size_t num_states,
                           std::size_t num_actions, double sparsity,
                           double discount = kDefaultDiscount);

/// Seeded reward with entries uniform in [lo, hi).
RewardTable make_random_reward(std::uint64_t seed, std::size_t num_states,
                               std::size_t num_actions, double lo = -1.0,
                               double hi = 1.0);

}  // namespace agency
