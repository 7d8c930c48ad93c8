#include <doctest.h>

#include <cmath>

#include "agency/agency_losses.hpp"
#include "agency/errors.hpp"
#include "agency/generators.hpp"
#include "oracles.hpp"

using namespace agency;

TEST_CASE("belief model shape checks") {
  const auto mdp = make_gridworld(2, 2, 0.0, 0.9);
  CHECK_NOTHROW(BeliefModel::exact(mdp).check_shape(mdp));
  CHECK_THROWS_AS(BeliefModel::uniform(3, 4).check_shape(mdp), DimensionError);
  CHECK_THROWS_AS(BeliefModel(1, 1, {0.5}), ValidationError);
  CHECK_THROWS_AS(BeliefModel(2, 1, {1.0}), DimensionError);
}

TEST_CASE("action sequence channel") {
  const auto mdp = make_gridworld(3, 1, 0.0, 0.9);
  const auto ch = action_sequence_channel(mdp, 0, 2);
  CHECK(ch.num_inputs() == 16);
  CHECK(ch.num_outputs() == 3);
  // Sequence (right, right) is index 3 * 4 + 3 and ends in the last cell.
  CHECK(ch.row(15)[2] == 1.0);
  // (left, right) ends in the middle cell.
  CHECK(ch.row(2 * 4 + 3)[1] == 1.0);
  CHECK_THROWS_AS(action_sequence_channel(mdp, 0, 7), ResourceError);
  CHECK_THROWS_AS(action_sequence_channel(mdp, 0, 0), ValidationError);
  CHECK_THROWS_AS(action_sequence_channel(mdp, 3, 1), ValidationError);
}

TEST_CASE("empowerment on deterministic gridworlds matches reachable-cell counts") {
  for (std::size_t w = 1; w <= 4; ++w) {
    for (std::size_t h = 1; h <= 3; ++h) {
      const auto mdp = make_gridworld(w, h, 0.0, 0.9);
      for (std::size_t horizon = 1; horizon <= 3; ++horizon) {
        const auto all = empowerment_all_states(mdp, horizon, 1e-10);
        for (std::size_t s = 0; s < w * h; ++s) {
          const double expected =
              std::log2(static_cast<double>(oracle::reachable_cells(w, h, s / w, s % w, horizon)));
          CHECK(std::abs(all[s].capacity_in(LogBase::bits) - expected) <= 1e-6);
        }
      }
    }
  }
}

TEST_CASE("empowerment of a 2x2 corner is log2 3 bits at horizon 1") {
  const auto mdp = make_gridworld(2, 2, 0.0, 0.9);
  CHECK(empowerment(mdp, 0, 1, 1e-12).capacity_in(LogBase::bits) ==
        doctest::Approx(std::log2(3.0)).epsilon(1e-10));
}

TEST_CASE("empowerment is non-decreasing in horizon on deterministic gridworlds") {
  const auto mdp = make_gridworld(4, 3, 0.0, 0.9);
  for (std::size_t s = 0; s < 12; ++s) {
    double previous = 0.0;
    for (std::size_t horizon = 1; horizon <= 4; ++horizon) {
      const double e = empowerment(mdp, s, horizon, 1e-10).capacity;
      CHECK(e >= previous - 1e-9);
      previous = e;
    }
  }
}

TEST_CASE("slip lowers empowerment") {
  const auto exact = make_gridworld(3, 3, 0.0, 0.9);
  const auto slippery = make_gridworld(3, 3, 0.4, 0.9);
  CHECK(empowerment(slippery, 4, 1, 1e-10).capacity < empowerment(exact, 4, 1, 1e-10).capacity);
}

TEST_CASE("parallel and serial empowerment agree") {
  const auto mdp = make_random_mdp(17, 9, 3, 0.3, 0.9);
  const auto all = empowerment_all_states(mdp, 2, 1e-10);
  for (std::size_t s = 0; s < 9; ++s) {
    CHECK(all[s].capacity == empowerment(mdp, s, 2, 1e-10).capacity);
  }
}

TEST_CASE("agency objective") {
  CHECK(agency_objective({1.0, 1.0, 0.0}, 0.5, 2.0, 9.0) == doctest::Approx(-1.5));
  CHECK(agency_objective({2.0, 0.5, 3.0}, 1.0, 4.0, 1.0) == doctest::Approx(3.0));
  CHECK(agency_objective({1.0, 1.0, 0.5}, 1.0, 2.0, 0.4) == doctest::Approx(-0.8));
  CHECK_THROWS_AS(agency_objective({-1.0, 1.0, 0.0}, 1.0, 1.0, 1.0), ValidationError);
}

TEST_CASE("ideal agency reward against a hand computation") {
  const auto mdp = make_gridworld(2, 1, 0.0, 0.9);
  const auto belief = BeliefModel::uniform(2, 4);
  IdealRewardOptions opts;
  opts.smoothing = 1e-9;
  const AgencyWeights weights{0.7, 1.3, 0.0};
  const auto r = ideal_agency_reward(mdp, belief, weights, std::nullopt, opts);
  // Both cells of a 1x2 corridor reach 2 cells in one step: E = ln 2 everywhere.
  const double expected = 0.7 * -std::log(0.5 + 1e-9) + 1.3 * std::log(2.0);
  for (double v : r.values()) CHECK(v == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("ideal agency reward pieces") {
  const auto mdp = make_gridworld(3, 3, 0.1, 0.9);
  const auto belief = BeliefModel::exact(mdp);
  IdealRewardOptions opts;
  SUBCASE("curiosity only") {
    const auto r = ideal_agency_reward(mdp, belief, {1.0, 0.0, 0.0}, std::nullopt, opts);
    for (std::size_t s = 0; s < 9; ++s)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t n = 0; n < 9; ++n)
          CHECK(r(s, a, n) == doctest::Approx(-std::log(mdp.transition(s, a, n) + 1e-9)));
  }
  SUBCASE("empowerment anchors") {
    const auto e = empowerment_all_states(mdp, 1, opts.tol);
    const auto succ = ideal_agency_reward(mdp, belief, {0.0, 1.0, 0.0}, std::nullopt, opts);
    opts.anchor = EmpowermentAnchor::source;
    const auto src = ideal_agency_reward(mdp, belief, {0.0, 1.0, 0.0}, std::nullopt, opts);
    for (std::size_t s = 0; s < 9; ++s)
      for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t n = 0; n < 9; ++n) {
          CHECK(succ(s, a, n) == doctest::Approx(e[n].capacity));
          CHECK(src(s, a, n) == doctest::Approx(e[s].capacity));
        }
  }
  SUBCASE("bits scale") {
    const auto nats = ideal_agency_reward(mdp, belief, {1.0, 1.0, 0.0}, std::nullopt, opts);
    opts.base = LogBase::bits;
    const auto bits = ideal_agency_reward(mdp, belief, {1.0, 1.0, 0.0}, std::nullopt, opts);
    for (std::size_t i = 0; i < nats.size(); ++i)
      CHECK(bits.values()[i] == doctest::Approx(nats.values()[i] / std::log(2.0)));
  }
  SUBCASE("mesa term") {
    const auto mesa = make_random_reward(4, 9, 4);
    const auto without = ideal_agency_reward(mdp, belief, {1.0, 1.0, 0.0}, std::nullopt, opts);
    const auto with = ideal_agency_reward(mdp, belief, {1.0, 1.0, 2.5}, mesa, opts);
    for (std::size_t i = 0; i < with.size(); ++i)
      CHECK(with.values()[i] == doctest::Approx(without.values()[i] + 2.5 * mesa.values()[i]));
  }
  SUBCASE("invalid inputs") {
    opts.smoothing = 0.0;
    CHECK_THROWS_AS(ideal_agency_reward(mdp, belief, {}, std::nullopt, opts), ValidationError);
    opts.smoothing = 1e-9;
    CHECK_THROWS_AS(ideal_agency_reward(mdp, BeliefModel::uniform(2, 4), {}, std::nullopt, opts),
                    DimensionError);
    CHECK_THROWS_AS(ideal_agency_reward(mdp, belief, {-1.0, 1.0, 0.0}, std::nullopt, opts),
                    ValidationError);
  }
  SUBCASE("absent mesa table contributes nothing") {
    CHECK(ideal_agency_reward(mdp, belief, {1.0, 1.0, 4.0}, std::nullopt, opts) ==
          ideal_agency_reward(mdp, belief, {1.0, 1.0, 0.0}, std::nullopt, opts));
  }
}
