#include "agency/serialize.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "agency/errors.hpp"

namespace agency {
namespace {

// Converts nlohmann access errors into ParseError with context.
template <typename F>
auto parse_guard(const char* what, F&& body) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

struct Tensor3 {
  std::size_t d0 = 0;
  std::size_t d1 = 0;
  std::size_t d2 = 0;
  std::vector<double> flat;
};

Tensor3 read_tensor3(const Json& nested) {
  Tensor3 t;
  if (!nested.is_array() || nested.empty()) throw ParseError("expected a non-empty 3-d array");
  t.d0 = nested.size();
  t.d1 = nested.at(0).size();
  t.d2 = t.d1 == 0 ? 0 : nested.at(0).at(0).size();
  for (const auto& plane : nested) {
    if (!plane.is_array() || plane.size() != t.d1) throw ParseError("ragged 3-d array");
    for (const auto& row : plane) {
      if (!row.is_array() || row.size() != t.d2) throw ParseError("ragged 3-d array");
      for (const auto& v : row) t.flat.push_back(v.get<double>());
    }
  }
  return t;
}

Json write_tensor3(std::span<const double> flat, std::size_t d0, std::size_t d1,
                   std::size_t d2) {
  Json out = Json::array();
  for (std::size_t i = 0; i < d0; ++i) {
    Json plane = Json::array();
    for (std::size_t j = 0; j < d1; ++j) {
      const auto begin = flat.begin() + static_cast<std::ptrdiff_t>((i * d1 + j) * d2);
      plane.push_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(d2)));
    }
    out.push_back(std::move(plane));
  }
  return out;
}

std::vector<double> read_matrix(const Json& nested, std::size_t& rows, std::size_t& cols) {
  if (!nested.is_array() || nested.empty()) throw ParseError("expected a non-empty 2-d array");
  rows = nested.size();
  cols = nested.at(0).size();
  std::vector<double> flat;
  for (const auto& row : nested) {
    if (!row.is_array() || row.size() != cols) throw ParseError("ragged 2-d array");
    for (const auto& v : row) flat.push_back(v.get<double>());
  }
  return flat;
}

void expect_dims(const Json& doc, const char* key, std::size_t actual) {
  if (doc.contains(key) && doc.at(key).get<std::size_t>() != actual) {
    throw DimensionError(std::string("\"") + key + "\" disagrees with the nested array shape");
  }
}

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FileNotFoundError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
}

Json to_json(const TabularMdp& mdp) {
  Json out;
  out["num_states"] = mdp.num_states();
  out["num_actions"] = mdp.num_actions();
  out["discount"] = mdp.discount();
  out["initial_dist"] = std::vector<double>(mdp.initial_dist().begin(), mdp.initial_dist().end());
  out["transition"] =
      write_tensor3(mdp.transitions(), mdp.num_states(), mdp.num_actions(), mdp.num_states());
  return out;
}

TabularMdp mdp_from_json(const Json& doc) {
  return parse_guard("MDP", [&] {
    auto t = read_tensor3(doc.at("transition"));
    if (t.d2 != t.d0) throw DimensionError("transition tensor must be (S, A, S)");
    expect_dims(doc, "num_states", t.d0);
    expect_dims(doc, "num_actions", t.d1);
    const double discount = doc.value("discount", 0.9);
    if (doc.contains("initial_dist")) {
      return TabularMdp(t.d0, t.d1, std::move(t.flat), discount,
                        doc.at("initial_dist").get<std::vector<double>>());
    }
    return TabularMdp(t.d0, t.d1, std::move(t.flat), discount);
  });
}

Json to_json(const RewardTable& reward) {
  Json out;
  out["values"] = write_tensor3(reward.values(), reward.num_states(), reward.num_actions(),
                                reward.num_states());
  return out;
}

RewardTable reward_from_json(const Json& doc) {
  return parse_guard("reward", [&] {
    auto t = read_tensor3(doc.at("values"));
    if (t.d2 != t.d0) throw DimensionError("reward table must be (S, A, S)");
    return RewardTable(t.d0, t.d1, std::move(t.flat));
  });
}

Json to_json(const Policy& policy) {
  Json out;
  Json rows = Json::array();
  for (std::size_t s = 0; s < policy.num_states(); ++s) {
    const auto r = policy.row(s);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  out["probs"] = std::move(rows);
  return out;
}

Policy policy_from_json(const Json& doc) {
  return parse_guard("policy", [&] {
    std::size_t rows = 0;
    std::size_t cols = 0;
    auto flat = read_matrix(doc.at("probs"), rows, cols);
    return Policy(rows, cols, std::move(flat));
  });
}

Json to_json(const Distribution& dist) {
  Json out;
  out["probs"] = std::vector<double>(dist.probs().begin(), dist.probs().end());
  return out;
}

Distribution distribution_from_json(const Json& doc) {
  return parse_guard("distribution", [&] {
    const Json& probs = doc.is_array() ? doc : doc.at("probs");
    return Distribution(probs.get<std::vector<double>>());
  });
}

Json to_json(const ChannelMatrix& channel) {
  Json out;
  out["num_inputs"] = channel.num_inputs();
  out["num_outputs"] = channel.num_outputs();
  Json rows = Json::array();
  for (std::size_t x = 0; x < channel.num_inputs(); ++x) {
    const auto r = channel.row(x);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  out["rows"] = std::move(rows);
  return out;
}

ChannelMatrix channel_from_json(const Json& doc) {
  return parse_guard("channel", [&] {
    std::size_t rows = 0;
    std::size_t cols = 0;
    auto flat = read_matrix(doc.at("rows"), rows, cols);
    expect_dims(doc, "num_inputs", rows);
    expect_dims(doc, "num_outputs", cols);
    return ChannelMatrix(rows, cols, std::move(flat));
  });
}

Json to_json(const BeliefModel& belief) {
  Json out;
  out["num_states"] = belief.num_states();
  out["num_actions"] = belief.num_actions();
  out["predicted"] = write_tensor3(belief.predicted(), belief.num_states(),
                                   belief.num_actions(), belief.num_states());
  return out;
}

BeliefModel belief_from_json(const Json& doc) {
  return parse_guard("belief", [&] {
    auto t = read_tensor3(doc.at("predicted"));
    if (t.d2 != t.d0) throw DimensionError("belief tensor must be (S, A, S)");
    expect_dims(doc, "num_states", t.d0);
    expect_dims(doc, "num_actions", t.d1);
    return BeliefModel(t.d0, t.d1, std::move(t.flat));
  });
}

Json to_json(const FunctionCube& cube) {
  Json out;
  out["n"] = cube.n();
  out["bound_m"] = cube.bound_m();
  out["epsilon"] = cube.epsilon();
  out["f_ideal"] = std::vector<double>(cube.f_ideal().begin(), cube.f_ideal().end());
  return out;
}

FunctionCube cube_from_json(const Json& doc) {
  return parse_guard("cube", [&] {
    auto ideal = doc.at("f_ideal").get<std::vector<double>>();
    expect_dims(doc, "n", ideal.size());
    return FunctionCube(doc.at("bound_m").get<double>(), std::move(ideal),
                        doc.at("epsilon").get<double>());
  });
}

SubspaceBasis basis_from_json(const Json& doc) {
  return parse_guard("basis", [&] {
    return SubspaceBasis{doc.at("c0").get<std::vector<double>>(),
                         doc.at("e0").get<std::vector<double>>(),
                         doc.at("a0").get<std::vector<double>>()};
  });
}

Json to_json(const CapacityResult& result) {
  Json out;
  out["capacity_bits"] = result.capacity_in(LogBase::bits);
  out["capacity_nats"] = result.capacity;
  out["input_dist"] =
      std::vector<double>(result.input_dist.probs().begin(), result.input_dist.probs().end());
  out["iterations"] = result.iterations;
  out["achieved_tol"] = result.achieved_tol;
  return out;
}

Json to_json(const StarcReport& report) {
  Json out;
  out["distance"] = report.distance;
  out["normalizer"] = std::string(to_string(report.normalizer));
  out["distance_kind"] = std::string(to_string(report.distance_kind));
  out["weighting"] = std::string(to_string(report.weighting));
  out["canonical_policy"] = report.uniform_canonical_policy ? "uniform" : "custom";
  out["trivial_f"] = report.trivial_f;
  out["trivial_a"] = report.trivial_a;
  out["norm_f"] = report.norm_f;
  out["norm_a"] = report.norm_a;
  out["config_tol"] = report.config_tol;
  out["metric_kind"] = "pseudometric";
  return out;
}

Json to_json(const MeasureReport& report) {
  Json out;
  out["log10_measure"] = finite_or_null(report.log10_measure);
  out["log10_total"] = report.log10_total;
  out["log10_probability"] = finite_or_null(report.log10_probability);
  out["measure_is_zero"] = report.measure_is_zero;
  out["interval_lengths"] = report.interval_lengths;
  out["independence_assumed"] = report.independence_assumed;
  return out;
}

Json to_json(const MonteCarloEstimate& estimate) {
  Json out;
  out["estimate"] = estimate.estimate;
  out["std_error"] = estimate.std_error;
  out["hits"] = estimate.hits;
  out["samples"] = estimate.samples;
  out["underpowered"] = estimate.underpowered;
  return out;
}

Json to_json(const ProjectionResult& projection) {
  Json out;
  out["alpha"] = projection.coefficients[0];
  out["beta"] = projection.coefficients[1];
  out["gamma"] = projection.coefficients[2];
  out["residual_norm"] = projection.residual_norm;
  out["effective_rank"] = projection.effective_rank;
  return out;
}

Json to_json(const RateComparison& rates) {
  Json out;
  out["dense_rate"] = rates.dense_rate;
  out["sparse_rate"] = rates.sparse_rate;
  out["speedup"] = rates.speedup;
  out["theta_constants_assumed"] = rates.theta_constants_assumed;
  return out;
}

}  // namespace agency
