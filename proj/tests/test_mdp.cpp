#include <doctest.h>

#include <cmath>

#include "agency/errors.hpp"
#include "agency/generators.hpp"
#include "agency/mdp.hpp"
#include "oracles.hpp"

using namespace agency;

namespace {

TabularMdp single_state(std::size_t actions, double discount) {
  return TabularMdp(1, actions, std::vector<double>(actions, 1.0), discount);
}

// 0 <-> 1 deterministic cycle, one action.
TabularMdp two_cycle(double discount) {
  return TabularMdp(2, 1, {0.0, 1.0, 1.0, 0.0}, discount);
}

// States 0-1-2 in a line, actions left/right, walls hold position.
TabularMdp three_chain() {
  std::vector<double> t(3 * 2 * 3, 0.0);
  auto set = [&](std::size_t s, std::size_t a, std::size_t n) { t[(s * 2 + a) * 3 + n] = 1.0; };
  set(0, 0, 0); set(0, 1, 1);
  set(1, 0, 0); set(1, 1, 2);
  set(2, 0, 1); set(2, 1, 2);
  return TabularMdp(3, 2, std::move(t), 0.9);
}

RewardTable source_reward(std::size_t states, std::size_t actions, std::vector<double> per_state) {
  std::vector<double> v(states * actions * states);
  for (std::size_t s = 0; s < states; ++s)
    for (std::size_t i = 0; i < actions * states; ++i) v[s * actions * states + i] = per_state[s];
  return RewardTable(states, actions, std::move(v));
}

}  // namespace

TEST_CASE("construction validates stochasticity, shape and discount") {
  CHECK_THROWS_AS(TabularMdp(1, 1, {0.5}, 0.9), ValidationError);
  CHECK_THROWS_AS(TabularMdp(1, 1, {-0.5, 1.5}, 0.9), DimensionError);
  CHECK_THROWS_AS(TabularMdp(2, 1, {1.0, -0.0, 1.5, -0.5}, 0.9), ValidationError);
  CHECK_THROWS_AS(TabularMdp(1, 1, {1.0}, 1.0), ValidationError);
  CHECK_THROWS_AS(TabularMdp(1, 1, {1.0}, 0.5, {0.7}), ValidationError);
  CHECK_THROWS_AS(TabularMdp(0, 1, {}, 0.5), ValidationError);
  CHECK_THROWS_AS(RewardTable(1, 1, {NAN}), ValidationError);
  CHECK_THROWS_AS(Policy(1, 2, {0.6, 0.6}), ValidationError);
}

TEST_CASE("policy_evaluation") {
  SUBCASE("single state geometric series") {
    const auto mdp = single_state(1, 0.5);
    const auto v = policy_evaluation(mdp, RewardTable::constant(1, 1, 3.0), Policy::uniform(1, 1), 1e-12);
    CHECK(v[0] == doctest::Approx(6.0).epsilon(1e-14));
  }
  SUBCASE("zero reward is a fixed point") {
    const auto mdp = make_random_mdp(5, 6, 3, 0.3);
    const auto v = policy_evaluation(mdp, RewardTable::zeros_like(mdp), Policy::uniform(6, 3), 1e-12);
    for (double x : v.values) CHECK(x == 0.0);
  }
  SUBCASE("two-state cycle against the hand-solved 2x2 system") {
    const auto mdp = two_cycle(0.9);
    const auto reward = source_reward(2, 1, {1.0, 0.0});
    const auto v = policy_evaluation(mdp, reward, Policy::uniform(2, 1), 1e-12);
    const auto expected = oracle::evaluate_deterministic(mdp, reward, {0, 0});
    CHECK(expected[0] == doctest::Approx(1.0 / 0.19).epsilon(1e-12));
    CHECK(v[0] == doctest::Approx(5.263157894736842).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(4.736842105263158).epsilon(1e-12));
  }
  SUBCASE("residual bound holds on random instances, both solver paths") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto mdp = make_random_mdp(seed, 7, 3, 0.4);
      const auto reward = make_random_reward(seed + 100, 7, 3);
      const Policy pi = Policy::uniform(7, 3);
      const auto v = policy_evaluation(mdp, reward, pi, 1e-9);
      CHECK(evaluation_residual(mdp, reward, pi, v) <= 1e-9);
    }
    // Above the direct-solve limit the iterative path runs.
    const auto big = make_random_mdp(11, kDirectSolveLimit + 8, 1, 0.99);
    const auto reward = make_random_reward(12, kDirectSolveLimit + 8, 1);
    const Policy pi = Policy::uniform(kDirectSolveLimit + 8, 1);
    const auto v = policy_evaluation(big, reward, pi, 1e-8);
    CHECK(evaluation_residual(big, reward, pi, v) <= 1e-8);
  }
  SUBCASE("errors") {
    const auto mdp = single_state(2, 0.5);
    CHECK_THROWS_AS(policy_evaluation(mdp, RewardTable::zeros(2, 2), Policy::uniform(1, 2), 1e-9),
                    DimensionError);
    CHECK_THROWS_AS(policy_evaluation(mdp, RewardTable::zeros(1, 2), Policy::uniform(1, 1), 1e-9),
                    DimensionError);
    CHECK_THROWS_AS(policy_evaluation(mdp, RewardTable::zeros(1, 2), Policy::uniform(1, 2), 0.0),
                    ValidationError);
  }
}

TEST_CASE("value_iteration") {
  SUBCASE("zero reward picks action 0 everywhere") {
    const auto mdp = make_random_mdp(3, 4, 3, 0.0);
    const auto sol = value_iteration(mdp, RewardTable::zeros_like(mdp), 1e-10);
    for (double x : sol.value.values) CHECK(x == 0.0);
    for (auto a : sol.policy.argmax_actions()) CHECK(a == 0);
    CHECK(sol.policy.is_deterministic());
  }
  SUBCASE("dominant action") {
    const auto mdp = single_state(2, 0.5);
    const auto sol = value_iteration(mdp, RewardTable(1, 2, {0.0, 1.0}), 1e-12);
    CHECK(sol.policy(0, 1) == 1.0);
    CHECK(sol.value[0] == doctest::Approx(2.0).epsilon(1e-11));
  }
  SUBCASE("three-state chain matches policy enumeration") {
    const auto mdp = three_chain();
    const auto reward = source_reward(3, 2, {0.0, 0.0, 1.0});
    const auto brute = oracle::enumerate_policies(mdp, reward);
    // Frozen from the enumeration oracle: 0.9^dist / (1 - 0.9).
    CHECK(brute.best_values[0] == doctest::Approx(8.1).epsilon(1e-12));
    CHECK(brute.best_values[1] == doctest::Approx(9.0).epsilon(1e-12));
    CHECK(brute.best_values[2] == doctest::Approx(10.0).epsilon(1e-12));
    const auto sol = value_iteration(mdp, reward, 1e-12);
    for (std::size_t s = 0; s < 3; ++s) {
      CHECK(sol.value[s] == doctest::Approx(brute.best_values[s]).epsilon(1e-10));
      CHECK(sol.policy(s, 1) == 1.0);
    }
    CHECK(optimality_residual(mdp, reward, sol.value) <= 1e-12);
  }
  SUBCASE("optimal on every small random instance") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const std::size_t ns = 1 + seed % 5;
      const std::size_t na = 1 + seed % 3;
      const auto mdp = make_random_mdp(seed, ns, na, (seed % 4) * 0.2);
      const auto reward = make_random_reward(seed + 7, ns, na);
      const double tol = 1e-10;
      const auto sol = value_iteration(mdp, reward, tol);
      CHECK(optimality_residual(mdp, reward, sol.value) <= tol);
      const auto brute = oracle::enumerate_policies(mdp, reward);
      const double achieved = expected_return(mdp, reward, sol.policy, 1e-12);
      CHECK(std::abs(achieved - brute.max_return) <= 1e-8);
    }
  }
}

TEST_CASE("expected_return") {
  CHECK(expected_return(single_state(1, 0.9), RewardTable::zeros(1, 1), Policy::uniform(1, 1), 1e-12) == 0.0);
  CHECK(expected_return(single_state(1, 0.9), RewardTable::constant(1, 1, 1.0), Policy::uniform(1, 1), 1e-12) ==
        doctest::Approx(10.0).epsilon(1e-13));
  const auto mdp = two_cycle(0.9);
  CHECK(expected_return(mdp, source_reward(2, 1, {1.0, 0.0}), Policy::uniform(2, 1), 1e-12) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("return_range") {
  SUBCASE("constant reward has zero range") {
    const auto mdp = make_random_mdp(9, 4, 2, 0.0);
    CHECK(return_range(mdp, RewardTable::constant(4, 2, 3.5), 1e-10) <= 1e-8);
  }
  SUBCASE("single state two actions") {
    CHECK(return_range(single_state(2, 0.5), RewardTable(1, 2, {0.0, 1.0}), 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-10));
  }
  SUBCASE("matches exhaustive enumeration of 2^4 policies") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto mdp = make_random_mdp(seed, 4, 2, 0.25);
      const auto reward = make_random_reward(seed ^ 0xabc, 4, 2);
      const auto brute = oracle::enumerate_policies(mdp, reward);
      CHECK(return_range(mdp, reward, 1e-11) ==
            doctest::Approx(brute.max_return - brute.min_return).epsilon(1e-8));
    }
  }
  SUBCASE("shift invariance") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto mdp = make_random_mdp(seed, 5, 3, 0.2);
      const auto reward = make_random_reward(seed + 1, 5, 3);
      CHECK(std::abs(return_range(mdp, reward, 1e-11) -
                     return_range(mdp, reward.plus_constant(-4.25), 1e-11)) <= 1e-8);
    }
  }
}

TEST_CASE("make_gridworld") {
  SUBCASE("1x1 is all self-loops") {
    const auto g = make_gridworld(1, 1, 0.0);
    CHECK(g.num_states() == 1);
    CHECK(g.num_actions() == 4);
    for (std::size_t a = 0; a < 4; ++a) CHECK(g.transition(0, a, 0) == 1.0);
  }
  SUBCASE("3x3 center reaches four distinct cells") {
    const auto g = make_gridworld(3, 3, 0.0);
    CHECK(g.transition(4, 0, 1) == 1.0);  // up
    CHECK(g.transition(4, 1, 7) == 1.0);  // down
    CHECK(g.transition(4, 2, 3) == 1.0);  // left
    CHECK(g.transition(4, 3, 5) == 1.0);  // right
    CHECK(g.discount() == 0.9);
  }
  SUBCASE("2x2 slip mixture, hand composed") {
    const auto g = make_gridworld(2, 2, 0.2);
    // right from (0,0): 0.8 to cell 1; slip 0.05 each to up(0), down(2), left(0), right(1).
    CHECK(g.transition(0, 3, 0) == doctest::Approx(0.10).epsilon(1e-15));
    CHECK(g.transition(0, 3, 1) == doctest::Approx(0.85).epsilon(1e-15));
    CHECK(g.transition(0, 3, 2) == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(g.transition(0, 3, 3) == 0.0);
  }
  CHECK_THROWS_AS(make_gridworld(0, 3, 0.0), ValidationError);
  CHECK_THROWS_AS(make_gridworld(2, 2, 1.0), ValidationError);
}

TEST_CASE("make_random_mdp") {
  const auto a = make_random_mdp(42, 3, 2, 0.0);
  const auto b = make_random_mdp(42, 3, 2, 0.0);
  CHECK(std::equal(a.transitions().begin(), a.transitions().end(), b.transitions().begin()));
  for (double p : a.transitions()) CHECK(p > 0.0);
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t act = 0; act < 2; ++act) {
      double total = 0.0;
      for (double p : a.transition_row(s, act)) total += p;
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
  const auto sparse = make_random_mdp(42, 10, 2, 0.5);
  for (std::size_t s = 0; s < 10; ++s) {
    const auto row = sparse.transition_row(s, 0);
    CHECK(std::count(row.begin(), row.end(), 0.0) == 5);
  }
  const auto c = make_random_mdp(43, 3, 2, 0.0);
  CHECK_FALSE(std::equal(a.transitions().begin(), a.transitions().end(), c.transitions().begin()));
}
