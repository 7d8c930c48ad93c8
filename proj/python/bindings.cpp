#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "agency/agency_losses.hpp"
#include "agency/convergence.hpp"
#include "agency/errors.hpp"
#include "agency/generators.hpp"
#include "agency/information.hpp"
#include "agency/mdp.hpp"
#include "agency/measure.hpp"
#include "agency/runner.hpp"
#include "agency/serialize.hpp"
#include "agency/starc.hpp"

namespace py = pybind11;
using namespace agency;

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

namespace {

std::vector<double> flat(const Array& a) { return {a.data(), a.data() + a.size()}; }

void expect_ndim(const Array& a, py::ssize_t ndim, const char* what) {
  if (a.ndim() != ndim) {
    throw DimensionError(std::string(what) + " must have " + std::to_string(ndim) +
                         " dimensions");
  }
}

Array to_array(std::span<const double> v, std::vector<py::ssize_t> shape) {
  Array out(shape);
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

RewardTable reward_of(const Array& a) {
  expect_ndim(a, 3, "reward");
  if (a.shape(0) != a.shape(2)) throw DimensionError("reward must have shape (S, A, S)");
  return RewardTable(a.shape(0), a.shape(1), flat(a));
}

Array reward_array(const RewardTable& r) {
  const auto s = static_cast<py::ssize_t>(r.num_states());
  return to_array(r.values(), {s, static_cast<py::ssize_t>(r.num_actions()), s});
}

BeliefModel belief_of(const std::optional<Array>& a, const TabularMdp& mdp) {
  if (!a) return BeliefModel::exact(mdp);
  expect_ndim(*a, 3, "belief");
  return BeliefModel(a->shape(0), a->shape(1), flat(*a));
}

LogBase base_of(const std::string& text) {
  if (text == "nats") return LogBase::nats;
  if (text == "bits") return LogBase::bits;
  throw ValidationError("base must be 'nats' or 'bits'");
}

ChannelMatrix channel_of(const Array& a) {
  expect_ndim(a, 2, "channel");
  return ChannelMatrix(a.shape(0), a.shape(1), flat(a));
}

StarcConfig starc_config(const std::string& normalizer, const std::string& distance,
                         const std::string& weighting, double tol,
                         const std::optional<Array>& policy) {
  StarcConfig c;
  c.normalizer = parse_normalizer(normalizer);
  c.distance = parse_distance_kind(distance);
  c.weighting = parse_weighting(weighting);
  c.tol = tol;
  if (policy) {
    expect_ndim(*policy, 2, "policy");
    c.canonical_policy = Policy(policy->shape(0), policy->shape(1), flat(*policy));
  }
  c.validate();
  return c;
}

IdealRewardOptions reward_options(std::size_t horizon, double smoothing, double tol,
                                  const std::string& base, const std::string& anchor) {
  IdealRewardOptions o;
  o.horizon = horizon;
  o.smoothing = smoothing;
  o.tol = tol;
  o.base = base_of(base);
  if (anchor == "successor") {
    o.anchor = EmpowermentAnchor::successor;
  } else if (anchor == "source") {
    o.anchor = EmpowermentAnchor::source;
  } else {
    throw ValidationError("anchor must be 'successor' or 'source'");
  }
  return o;
}

std::optional<RewardTable> mesa_of(const std::optional<Array>& a) {
  if (!a) return std::nullopt;
  return reward_of(*a);
}

py::dict capacity_dict(const CapacityResult& r) {
  py::dict d;
  d["capacity_nats"] = r.capacity;
  d["capacity_bits"] = r.capacity_in(LogBase::bits);
  d["input_dist"] = std::vector<double>(r.input_dist.probs().begin(), r.input_dist.probs().end());
  d["iterations"] = r.iterations;
  d["achieved_tol"] = r.achieved_tol;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Information-theoretic agency measures over tabular MDPs";
  m.attr("__version__") = AGENCY_VERSION;

  static py::exception<Error> base_error(m, "AgencyError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", base_error);
  py::register_exception<DimensionError>(m, "DimensionError", base_error);
  py::register_exception<SingularityError>(m, "SingularityError", base_error);
  py::register_exception<IterationLimitError>(m, "IterationLimitError", base_error);
  py::register_exception<ResourceError>(m, "ResourceError", base_error);
  py::register_exception<DomainError>(m, "DomainError", base_error);
  py::register_exception<FileNotFoundError>(m, "FileNotFoundError", base_error);
  py::register_exception<ParseError>(m, "ParseError", base_error);

  py::class_<TabularMdp>(m, "TabularMdp")
      .def(py::init([](const Array& transition, double discount,
                       std::optional<std::vector<double>> initial_dist) {
             expect_ndim(transition, 3, "transition");
             if (initial_dist) {
               return TabularMdp(transition.shape(0), transition.shape(1), flat(transition),
                                 discount, *initial_dist);
             }
             return TabularMdp(transition.shape(0), transition.shape(1), flat(transition),
                               discount);
           }),
           py::arg("transition"), py::arg("discount"), py::arg("initial_dist") = py::none())
      .def_property_readonly("num_states", &TabularMdp::num_states)
      .def_property_readonly("num_actions", &TabularMdp::num_actions)
      .def_property_readonly("discount", &TabularMdp::discount)
      .def_property_readonly("transition",
                             [](const TabularMdp& mdp) {
                               const auto s = static_cast<py::ssize_t>(mdp.num_states());
                               return to_array(mdp.transitions(),
                                               {s, static_cast<py::ssize_t>(mdp.num_actions()), s});
                             })
      .def_property_readonly("initial_dist", [](const TabularMdp& mdp) {
        return std::vector<double>(mdp.initial_dist().begin(), mdp.initial_dist().end());
      });

  m.def("gridworld", &make_gridworld, py::arg("width"), py::arg("height"),
        py::arg("slip") = 0.0, py::arg("discount") = kDefaultDiscount);
  m.def("random_mdp", &make_random_mdp, py::arg("seed"), py::arg("num_states"),
        py::arg("num_actions"), py::arg("sparsity") = 0.0,
        py::arg("discount") = kDefaultDiscount);
  m.def(
      "random_reward",
      [](std::uint64_t seed, std::size_t states, std::size_t actions, double lo, double hi) {
        return reward_array(make_random_reward(seed, states, actions, lo, hi));
      },
      py::arg("seed"), py::arg("num_states"), py::arg("num_actions"), py::arg("low") = -1.0,
      py::arg("high") = 1.0);

  m.def(
      "value_iteration",
      [](const TabularMdp& mdp, const Array& reward, double tol) {
        const auto sol = value_iteration(mdp, reward_of(reward), tol);
        return py::make_tuple(sol.value.values, sol.policy.argmax_actions());
      },
      py::arg("mdp"), py::arg("reward"), py::arg("tol") = 1e-10);
  m.def(
      "policy_evaluation",
      [](const TabularMdp& mdp, const Array& reward, const Array& policy, double tol) {
        expect_ndim(policy, 2, "policy");
        const Policy pi(policy.shape(0), policy.shape(1), flat(policy));
        return policy_evaluation(mdp, reward_of(reward), pi, tol).values;
      },
      py::arg("mdp"), py::arg("reward"), py::arg("policy"), py::arg("tol") = 1e-10);
  m.def(
      "return_range",
      [](const TabularMdp& mdp, const Array& reward, double tol) {
        return return_range(mdp, reward_of(reward), tol);
      },
      py::arg("mdp"), py::arg("reward"), py::arg("tol") = 1e-10);

  m.def(
      "curiosity_kl",
      [](std::vector<double> p, std::vector<double> q, double smoothing,
         const std::string& base) {
        return curiosity_kl(Distribution(std::move(p)), Distribution(std::move(q)), smoothing,
                            base_of(base));
      },
      py::arg("p"), py::arg("q"), py::arg("smoothing") = 0.0, py::arg("base") = "nats");
  m.def(
      "mutual_information",
      [](std::vector<double> p, const Array& channel, const std::string& base) {
        return mutual_information(Distribution(std::move(p)), channel_of(channel),
                                  base_of(base));
      },
      py::arg("input_dist"), py::arg("channel"), py::arg("base") = "nats");
  m.def(
      "channel_capacity",
      [](const Array& channel, double tol, std::size_t max_iter) {
        return capacity_dict(blahut_arimoto(channel_of(channel), tol, max_iter));
      },
      py::arg("channel"), py::arg("tol") = 1e-9, py::arg("max_iter") = 1000000);

  m.def(
      "empowerment",
      [](const TabularMdp& mdp, std::size_t state, std::size_t horizon, double tol,
         std::size_t cap) { return capacity_dict(empowerment(mdp, state, horizon, tol, cap)); },
      py::arg("mdp"), py::arg("state"), py::arg("horizon") = 1, py::arg("tol") = 1e-9,
      py::arg("enumeration_cap") = kDefaultEnumerationCap);
  m.def(
      "empowerment_all_states",
      [](const TabularMdp& mdp, std::size_t horizon, double tol, std::size_t cap) {
        std::vector<double> out;
        for (const auto& r : empowerment_all_states(mdp, horizon, tol, cap)) {
          out.push_back(r.capacity);
        }
        return out;
      },
      py::arg("mdp"), py::arg("horizon") = 1, py::arg("tol") = 1e-9,
      py::arg("enumeration_cap") = kDefaultEnumerationCap);
  m.def("agency_objective",
        [](double alpha, double beta, double gamma_mesa, double curiosity, double emp,
           double mesa) { return agency_objective({alpha, beta, gamma_mesa}, curiosity, emp, mesa); },
        py::arg("alpha"), py::arg("beta"), py::arg("gamma_mesa"), py::arg("curiosity"),
        py::arg("empowerment"), py::arg("mesa"));
  m.def(
      "ideal_agency_reward",
      [](const TabularMdp& mdp, std::optional<Array> belief, double alpha, double beta,
         double gamma_mesa, std::optional<Array> mesa, std::size_t horizon, double smoothing,
         double tol, const std::string& base, const std::string& anchor) {
        return reward_array(ideal_agency_reward(mdp, belief_of(belief, mdp),
                                                {alpha, beta, gamma_mesa}, mesa_of(mesa),
                                                reward_options(horizon, smoothing, tol, base, anchor)));
      },
      py::arg("mdp"), py::arg("belief") = py::none(), py::arg("alpha") = 1.0,
      py::arg("beta") = 1.0, py::arg("gamma_mesa") = 0.0, py::arg("mesa") = py::none(),
      py::arg("horizon") = 1, py::arg("smoothing") = kDefaultSmoothing, py::arg("tol") = 1e-9,
      py::arg("base") = "nats", py::arg("anchor") = "successor");

  m.def(
      "canonicalize",
      [](const Array& reward, const TabularMdp& mdp, std::optional<Array> policy) {
        return reward_array(
            canonicalize(reward_of(reward), mdp, starc_config("L2", "L2", "transition_weighted", 1e-10, policy)));
      },
      py::arg("reward"), py::arg("mdp"), py::arg("canonical_policy") = py::none());
  m.def(
      "apply_potential_shaping",
      [](const Array& reward, std::vector<double> phi, const TabularMdp& mdp) {
        return reward_array(apply_potential_shaping(reward_of(reward), {std::move(phi)}, mdp));
      },
      py::arg("reward"), py::arg("phi"), py::arg("mdp"));
  m.def(
      "starc_distance",
      [](const Array& rf, const Array& ra, const TabularMdp& mdp, const std::string& normalizer,
         const std::string& distance, const std::string& weighting, double tol,
         std::optional<Array> policy) {
        return starc_distance(reward_of(rf), reward_of(ra), mdp,
                              starc_config(normalizer, distance, weighting, tol, policy));
      },
      py::arg("reward_f"), py::arg("reward_a"), py::arg("mdp"), py::arg("normalizer") = "L2",
      py::arg("distance") = "L2", py::arg("weighting") = "transition_weighted",
      py::arg("tol") = 1e-10, py::arg("canonical_policy") = py::none());
  m.def(
      "agency_metric",
      [](const Array& candidate, const TabularMdp& mdp, std::optional<Array> belief,
         double alpha, double beta, double gamma_mesa, std::optional<Array> mesa,
         std::size_t horizon, const std::string& normalizer, const std::string& distance) {
        return agency_metric(reward_of(candidate), mdp, belief_of(belief, mdp),
                             {alpha, beta, gamma_mesa},
                             reward_options(horizon, kDefaultSmoothing, 1e-9, "nats", "successor"),
                             starc_config(normalizer, distance, "transition_weighted", 1e-10,
                                          std::nullopt),
                             mesa_of(mesa));
      },
      py::arg("candidate"), py::arg("mdp"), py::arg("belief") = py::none(),
      py::arg("alpha") = 1.0, py::arg("beta") = 1.0, py::arg("gamma_mesa") = 0.0,
      py::arg("mesa") = py::none(), py::arg("horizon") = 1, py::arg("normalizer") = "L2",
      py::arg("distance") = "L2");

  m.def(
      "epsilon_tube_measure",
      [](std::vector<double> f_ideal, double bound_m, double epsilon) {
        const auto r = epsilon_tube_measure(FunctionCube(bound_m, std::move(f_ideal), epsilon));
        py::dict d;
        d["log10_measure"] = r.log10_measure;
        d["measure_is_zero"] = r.measure_is_zero;
        d["log10_total"] = r.log10_total;
        d["log10_probability"] = r.log10_probability;
        d["interval_lengths"] = r.interval_lengths;
        d["independence_assumed"] = r.independence_assumed;
        return d;
      },
      py::arg("f_ideal"), py::arg("bound_m"), py::arg("epsilon"));
  m.def("interior_log10_probability", &interior_log10_probability, py::arg("n"),
        py::arg("bound_m"), py::arg("log10_epsilon"));
  m.def(
      "monte_carlo_measure",
      [](std::vector<double> f_ideal, double bound_m, double epsilon, std::uint64_t samples,
         std::uint64_t seed, std::size_t workers) {
        const auto r = monte_carlo_measure(FunctionCube(bound_m, std::move(f_ideal), epsilon),
                                           samples, seed, workers);
        py::dict d;
        d["estimate"] = r.estimate;
        d["std_error"] = r.std_error;
        d["hits"] = r.hits;
        d["samples"] = r.samples;
        d["underpowered"] = r.underpowered;
        return d;
      },
      py::arg("f_ideal"), py::arg("bound_m"), py::arg("epsilon"), py::arg("samples"),
      py::arg("seed") = 0, py::arg("workers") = 1);
  m.def(
      "subspace_projection",
      [](std::vector<double> c0, std::vector<double> e0, std::vector<double> a0,
         std::vector<double> f) {
        const auto r = subspace_projection({std::move(c0), std::move(e0), std::move(a0)}, f);
        py::dict d;
        d["coefficients"] = std::vector<double>(r.coefficients.begin(), r.coefficients.end());
        d["residual_norm"] = r.residual_norm;
        d["effective_rank"] = r.effective_rank;
        return d;
      },
      py::arg("c0"), py::arg("e0"), py::arg("a0"), py::arg("f"));

  m.def(
      "bounded_depth_epsilon",
      [](int depth_l, std::optional<double> params_n, std::optional<double> log10_params_n) {
        if (params_n.has_value() == log10_params_n.has_value()) {
          throw ValidationError("give exactly one of params_n and log10_params_n");
        }
        return bounded_depth_epsilon(params_n ? NetworkShape::from_params(depth_l, *params_n)
                                              : NetworkShape::from_log10_params(depth_l, *log10_params_n));
      },
      py::arg("depth_l"), py::arg("params_n") = py::none(), py::arg("log10_params_n") = py::none());
  m.def(
      "log_complexity",
      [](double log10_epsilon, const std::string& base) {
        if (base != "natural" && base != "ten") {
          throw ValidationError("base must be 'natural' or 'ten'");
        }
        return log_complexity(log10_epsilon,
                              base == "ten" ? ComplexityBase::ten : ComplexityBase::natural)
            .value;
      },
      py::arg("log10_epsilon"), py::arg("base") = "natural");
  m.def(
      "sparse_rate_compare",
      [](double d, double s, double t) {
        const auto r = sparse_rate_compare({d, s, t});
        py::dict out;
        out["dense_rate"] = r.dense_rate;
        out["sparse_rate"] = r.sparse_rate;
        out["speedup"] = r.speedup;
        return out;
      },
      py::arg("dim_d"), py::arg("sparsity_s"), py::arg("iterations_t"));

  m.def(
      "run_report_json",
      [](const std::string& config_json) {
        Json doc;
        try {
          doc = Json::parse(config_json);
        } catch (const nlohmann::json::parse_error& e) {
          throw ParseError(e.what());
        }
        return run_report(config_from_json(doc)).dump();
      },
      py::arg("config_json"));
}
