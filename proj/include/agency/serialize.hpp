#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "agency/agency_losses.hpp"
#include "agency/convergence.hpp"
#include "agency/information.hpp"
#include "agency/mdp.hpp"
#include "agency/measure.hpp"
#include "agency/starc.hpp"

namespace agency {

/// Insertion-ordered JSON; reports keep a stable, readable key order.
using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. FileNotFoundError / ParseError on failure.
Json read_json_file(const std::filesystem::path& path);

Json to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& doc);

/// {"values": [[[...]]]}, nested (s, a, s').
Json to_json(const RewardTable& reward);
RewardTable reward_from_json(const Json& doc);

Json to_json(const Policy& policy);
Policy policy_from_json(const Json& doc);

/// {"probs": [...]}; a bare array is also accepted on input.
Json to_json(const Distribution& dist);
Distribution distribution_from_json(const Json& doc);

Json to_json(const ChannelMatrix& channel);
ChannelMatrix channel_from_json(const Json& doc);

Json to_json(const BeliefModel& belief);
BeliefModel belief_from_json(const Json& doc);

Json to_json(const FunctionCube& cube);
FunctionCube cube_from_json(const Json& doc);

SubspaceBasis basis_from_json(const Json& doc);

Json to_json(const CapacityResult& result);
Json to_json(const StarcReport& report);
Json to_json(const MeasureReport& report);
Json to_json(const MonteCarloEstimate& estimate);
Json to_json(const ProjectionResult& projection);
Json to_json(const RateComparison& rates);

}  // namespace agency
