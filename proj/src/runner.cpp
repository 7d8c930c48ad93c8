#include "agency/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "agency/generators.hpp"
#include "agency/rng.hpp"

#ifndef AGENCY_VERSION
#define AGENCY_VERSION "0.0.0"
#endif

namespace agency {
namespace {

constexpr std::string_view kCommandNames[] = {
    "curiosity", "empowerment", "agency-reward", "starc-distance",
    "agency-metric", "measure", "convergence", "rates",
};

// Typed access to resolved settings.
class Settings {
 public:
  explicit Settings(Json values) : values_(std::move(values)) {}

  const Json& raw(const std::string& key) const { return values_.at(key); }
  bool is_null(const std::string& key) const { return values_.at(key).is_null(); }

  double real(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number()) throw ValidationError("setting '" + key + "' must be a number");
    return v.get<double>();
  }

  std::size_t count(const std::string& key) const {
    const double v = real(key);
    if (!(v >= 0.0) || std::floor(v) != v || v > 9.0e15) {
      throw ValidationError("setting '" + key + "' must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_string()) throw ValidationError("setting '" + key + "' must be a string");
    return v.get<std::string>();
  }

  bool flag(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_boolean()) throw ValidationError("setting '" + key + "' must be true or false");
    return v.get<bool>();
  }

  std::vector<double> reals(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_array()) throw ValidationError("setting '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw ValidationError("setting '" + key + "' must hold numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

 private:
  Json values_;
};

bool starts_with_group(const std::string& key, const std::string& group) {
  return key.size() > group.size() && key.compare(0, group.size(), group) == 0 &&
         key[group.size()] == '.';
}

bool in_surface(const std::string& key, const std::vector<std::string>& groups) {
  return std::any_of(groups.begin(), groups.end(),
                     [&](const std::string& g) { return starts_with_group(key, g); });
}

const Setting* find_setting(const std::string& key) {
  for (const auto& s : settings_table()) {
    if (s.key == key) return &s;
  }
  return nullptr;
}

std::optional<std::string> input_path(const RunConfig& config, const std::string& role) {
  const auto it = config.inputs.find(role);
  if (it == config.inputs.end()) return std::nullopt;
  return it->second;
}

// Independent sub-seeds so each random artifact has its own stream.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed ^ mix64(stream));
}

TabularMdp build_mdp(const RunConfig& config, const Settings& settings) {
  if (auto path = input_path(config, "mdp")) return mdp_from_json(read_json_file(*path));
  const std::string kind = settings.text("env.kind");
  const double discount = settings.real("env.discount");
  if (kind == "gridworld") {
    return make_gridworld(settings.count("env.width"), settings.count("env.height"),
                          settings.real("env.slip"), discount);
  }
  if (kind == "random") {
    return make_random_mdp(sub_seed(config.seed, 0), settings.count("env.states"),
                           settings.count("env.actions"), settings.real("env.sparsity"),
                           discount);
  }
  throw ValidationError("env.kind must be 'gridworld' or 'random'");
}

RewardTable load_or_random_reward(const RunConfig& config, const Settings& settings,
                                  const TabularMdp& mdp, const std::string& role,
                                  std::uint64_t stream) {
  if (auto path = input_path(config, role)) {
    auto reward = reward_from_json(read_json_file(*path));
    reward.check_shape(mdp);
    return reward;
  }
  return make_random_reward(sub_seed(config.seed, stream), mdp.num_states(),
                            mdp.num_actions(), settings.real("reward.low"),
                            settings.real("reward.high"));
}

LogBase parse_log_base(const std::string& text) {
  if (text == "nats") return LogBase::nats;
  if (text == "bits") return LogBase::bits;
  throw ValidationError("log base must be 'nats' or 'bits'");
}

AgencyWeights read_weights(const Settings& settings) {
  return AgencyWeights{settings.real("agency.alpha"), settings.real("agency.beta"),
                       settings.real("agency.gamma_mesa")};
}

IdealRewardOptions read_reward_options(const Settings& settings) {
  IdealRewardOptions options;
  options.horizon = settings.count("empowerment.horizon");
  options.tol = settings.real("empowerment.tol");
  options.enumeration_cap = settings.count("empowerment.cap");
  options.smoothing = settings.real("agency.smoothing");
  options.base = parse_log_base(settings.text("agency.log_base"));
  const std::string anchor = settings.text("agency.anchor");
  if (anchor == "successor") {
    options.anchor = EmpowermentAnchor::successor;
  } else if (anchor == "source") {
    options.anchor = EmpowermentAnchor::source;
  } else {
    throw ValidationError("agency.anchor must be 'successor' or 'source'");
  }
  return options;
}

BeliefModel build_belief(const RunConfig& config, const Settings& settings,
                         const TabularMdp& mdp) {
  if (auto path = input_path(config, "belief")) {
    auto belief = belief_from_json(read_json_file(*path));
    belief.check_shape(mdp);
    return belief;
  }
  const std::string kind = settings.text("agency.belief");
  if (kind == "exact") return BeliefModel::exact(mdp);
  if (kind == "uniform") return BeliefModel::uniform(mdp.num_states(), mdp.num_actions());
  throw ValidationError("agency.belief must be 'exact' or 'uniform'");
}

std::optional<RewardTable> load_mesa(const RunConfig& config, const TabularMdp& mdp) {
  if (auto path = input_path(config, "mesa")) {
    auto mesa = reward_from_json(read_json_file(*path));
    mesa.check_shape(mdp);
    return mesa;
  }
  return std::nullopt;
}

StarcConfig read_starc(const RunConfig& config, const Settings& settings,
                       const TabularMdp& mdp) {
  StarcConfig starc;
  starc.normalizer = parse_normalizer(settings.text("starc.normalizer"));
  starc.distance = parse_distance_kind(settings.text("starc.distance"));
  starc.weighting = parse_weighting(settings.text("starc.weighting"));
  starc.tol = settings.real("starc.tol");
  if (auto path = input_path(config, "policy")) {
    auto policy = policy_from_json(read_json_file(*path));
    policy.check_shape(mdp);
    starc.canonical_policy = std::move(policy);
  }
  starc.validate();
  return starc;
}

Distribution read_distribution(const RunConfig& config, const Settings& settings,
                               const std::string& role) {
  if (auto path = input_path(config, role)) {
    return distribution_from_json(read_json_file(*path));
  }
  const std::string key = "curiosity." + role;
  if (settings.is_null(key)) {
    throw ValidationError("curiosity needs '" + role + "': pass --set " + key +
                          "=[...] or an input file");
  }
  return Distribution(settings.reals(key));
}

Json run_curiosity(const RunConfig& config, const Settings& settings) {
  const auto p = read_distribution(config, settings, "p");
  const auto q = read_distribution(config, settings, "q");
  const double smoothing = settings.real("curiosity.smoothing");
  const double nats = curiosity_kl(p, q, smoothing, LogBase::nats);
  Json out;
  out["kl_nats"] = nats;
  out["kl_bits"] = from_nats(nats, LogBase::bits);
  out["smoothing"] = smoothing;
  return out;
}

Json run_empowerment(const RunConfig& config, const Settings& settings) {
  const auto mdp = build_mdp(config, settings);
  const auto horizon = settings.count("empowerment.horizon");
  const double tol = settings.real("empowerment.tol");
  const auto cap = settings.count("empowerment.cap");
  Json out;
  out["horizon"] = horizon;
  if (settings.flag("empowerment.all_states")) {
    const auto results = empowerment_all_states(mdp, horizon, tol, cap);
    std::vector<double> bits;
    std::vector<double> nats;
    for (const auto& r : results) {
      bits.push_back(r.capacity_in(LogBase::bits));
      nats.push_back(r.capacity);
    }
    out["capacity_bits"] = bits;
    out["capacity_nats"] = nats;
    return out;
  }
  const auto state = settings.count("empowerment.state");
  const auto channel = action_sequence_channel(mdp, state, horizon, cap);
  const auto result = blahut_arimoto(channel, tol, settings.count("empowerment.max_iter"));
  out["state"] = state;
  out.update(to_json(result));
  return out;
}

Json run_agency_reward(const RunConfig& config, const Settings& settings) {
  const auto mdp = build_mdp(config, settings);
  const auto belief = build_belief(config, settings, mdp);
  const auto options = read_reward_options(settings);
  const auto reward =
      ideal_agency_reward(mdp, belief, read_weights(settings), load_mesa(config, mdp), options);
  Json out;
  out["units"] = options.base == LogBase::bits ? "bits" : "nats";
  out["reward"] = to_json(reward);
  return out;
}

Json run_starc_distance(const RunConfig& config, const Settings& settings) {
  const auto mdp = build_mdp(config, settings);
  const auto reward_f = load_or_random_reward(config, settings, mdp, "reward_f", 1);
  const auto reward_a = load_or_random_reward(config, settings, mdp, "reward_a", 2);
  return to_json(starc_report(reward_f, reward_a, mdp, read_starc(config, settings, mdp)));
}

Json run_agency_metric(const RunConfig& config, const Settings& settings) {
  const auto mdp = build_mdp(config, settings);
  const auto candidate = load_or_random_reward(config, settings, mdp, "candidate", 3);
  const auto belief = build_belief(config, settings, mdp);
  const auto ideal = ideal_agency_reward(mdp, belief, read_weights(settings),
                                         load_mesa(config, mdp), read_reward_options(settings));
  Json out;
  const auto report = starc_report(candidate, ideal, mdp, read_starc(config, settings, mdp));
  out["agency_metric"] = report.distance;
  out.update(to_json(report));
  return out;
}

Json run_measure(const RunConfig& config, const Settings& settings) {
  Json out;
  if (!settings.is_null("measure.log10_epsilon")) {
    const auto n = settings.count("measure.n");
    const double bound = settings.real("measure.bound_m");
    const double log10_eps = settings.real("measure.log10_epsilon");
    const double log10_p = interior_log10_probability(n, bound, log10_eps);
    out["log10_measure"] = static_cast<double>(n) * (std::log10(2.0) + log10_eps);
    out["log10_total"] = static_cast<double>(n) * std::log10(bound);
    out["log10_probability"] = log10_p;
    out["closed_form"] = true;
    out["independence_assumed"] = true;
  } else {
    const FunctionCube cube = [&] {
      if (auto path = input_path(config, "cube")) return cube_from_json(read_json_file(*path));
      const double bound = settings.real("measure.bound_m");
      const double eps = settings.real("measure.epsilon");
      if (!settings.is_null("measure.f_ideal")) {
        return FunctionCube(bound, settings.reals("measure.f_ideal"), eps);
      }
      return FunctionCube::constant_ideal(settings.count("measure.n"), bound,
                                          settings.real("measure.ideal"), eps);
    }();
    out = to_json(epsilon_tube_measure(cube));
    out["closed_form"] = false;
    const auto samples = settings.count("measure.samples");
    if (samples > 0) {
      out["monte_carlo"] = to_json(monte_carlo_measure(cube, samples, config.seed,
                                                       settings.count("measure.workers")));
    }
  }
  if (auto path = input_path(config, "basis")) {
    const Json doc = read_json_file(*path);
    const auto basis = basis_from_json(doc);
    std::vector<double> target;
    try {
      target = doc.at("f").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("basis: ") + e.what());
    }
    out["projection"] = to_json(subspace_projection(basis, target));
  }
  return out;
}

Json run_convergence(const Settings& settings) {
  const int depth = static_cast<int>(settings.count("convergence.depth_l"));
  const NetworkShape shape =
      settings.is_null("convergence.log10_params_n")
          ? NetworkShape::from_params(depth, settings.real("convergence.params_n"))
          : NetworkShape::from_log10_params(depth, settings.real("convergence.log10_params_n"));
  const double log10_eps = bounded_depth_epsilon(shape);
  const std::string base_text = settings.text("convergence.nc_base");
  ComplexityBase base;
  if (base_text == "natural") {
    base = ComplexityBase::natural;
  } else if (base_text == "ten") {
    base = ComplexityBase::ten;
  } else {
    throw ValidationError("convergence.nc_base must be 'natural' or 'ten'");
  }
  const auto nc = log_complexity(log10_eps, base);
  Json out;
  out["log10_epsilon"] = log10_eps;
  out["nc_log"] = nc.value;
  out["nc_base"] = base_text;
  out["bound_at_equality"] = true;
  out["theta_constants_assumed"] = true;
  return out;
}

Json run_rates(const Settings& settings) {
  return to_json(sparse_rate_compare(RateQuery{settings.real("rates.dim_d"),
                                               settings.real("rates.sparsity_s"),
                                               settings.real("rates.iterations_t")}));
}

Json dispatch(const RunConfig& config, const Settings& settings) {
  switch (config.command) {
    case Command::curiosity: return run_curiosity(config, settings);
    case Command::empowerment: return run_empowerment(config, settings);
    case Command::agency_reward: return run_agency_reward(config, settings);
    case Command::starc_distance: return run_starc_distance(config, settings);
    case Command::agency_metric: return run_agency_metric(config, settings);
    case Command::measure: return run_measure(config, settings);
    case Command::convergence: return run_convergence(settings);
    case Command::rates: return run_rates(settings);
  }
  throw ValidationError("unknown command");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void flatten_scalars(const Json& node, const std::string& prefix,
                     std::vector<std::pair<std::string, std::string>>& cells) {
  for (const auto& [key, value] : node.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten_scalars(value, name, cells);
    } else if (value.is_number()) {
      cells.emplace_back(name, format_number(value.get<double>()));
    } else if (value.is_boolean()) {
      cells.emplace_back(name, value.get<bool>() ? "true" : "false");
    } else if (value.is_string()) {
      cells.emplace_back(name, value.get<std::string>());
    } else if (value.is_null()) {
      cells.emplace_back(name, "");
    }
  }
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

std::string json_cell(const Json& value) {
  if (value.is_number()) return format_number(value.get<double>());
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

void write_text(const RunConfig& config, std::ostream& out, const std::string& text) {
  if (config.output_path) {
    std::ofstream file(*config.output_path, std::ios::binary);
    if (!file) throw FileNotFoundError("cannot write '" + *config.output_path + "'");
    file << text;
  } else {
    out << text;
  }
}

}  // namespace

std::string_view to_string(Command command) {
  return kCommandNames[static_cast<std::size_t>(command)];
}

Command parse_command(std::string_view text) {
  for (std::size_t i = 0; i < std::size(kCommandNames); ++i) {
    if (kCommandNames[i] == text) return static_cast<Command>(i);
  }
  throw ValidationError("unknown command '" + std::string(text) + "'");
}

const std::vector<Command>& all_commands() {
  static const std::vector<Command> commands = {
      Command::curiosity, Command::empowerment, Command::agency_reward,
      Command::starc_distance, Command::agency_metric, Command::measure,
      Command::convergence, Command::rates,
  };
  return commands;
}

const std::vector<Setting>& settings_table() {
  static const std::vector<Setting> table = {
      {"env.kind", "gridworld", "environment when no mdp input: gridworld | random"},
      {"env.width", 3, "gridworld width"},
      {"env.height", 3, "gridworld height"},
      {"env.slip", 0.0, "gridworld slip probability"},
      {"env.states", 4, "random MDP state count"},
      {"env.actions", 2, "random MDP action count"},
      {"env.sparsity", 0.0, "random MDP fraction of zeroed transitions per row"},
      {"env.discount", 0.9, "discount for generated environments"},
      {"reward.low", -1.0, "lower bound of seeded random rewards"},
      {"reward.high", 1.0, "upper bound of seeded random rewards"},
      {"curiosity.p", nullptr, "observed distribution p (array) when no p input"},
      {"curiosity.q", nullptr, "predicted distribution q (array) when no q input"},
      {"curiosity.smoothing", 0.0, "constant added inside log q"},
      {"empowerment.state", 0, "state whose empowerment is computed"},
      {"empowerment.all_states", false, "compute every state's empowerment"},
      {"empowerment.horizon", 1, "action-sequence length"},
      {"empowerment.tol", 1e-9, "Blahut-Arimoto bound gap, nats"},
      {"empowerment.max_iter", 1000000, "Blahut-Arimoto iteration limit"},
      {"empowerment.cap", 4096, "maximum number of enumerated action sequences"},
      {"agency.alpha", 1.0, "curiosity weight"},
      {"agency.beta", 1.0, "empowerment weight"},
      {"agency.gamma_mesa", 0.0, "mesa weight"},
      {"agency.smoothing", 1e-9, "constant added inside log q for surprise"},
      {"agency.anchor", "successor", "empowerment evaluated at: successor | source"},
      {"agency.log_base", "nats", "units of the intrinsic reward: nats | bits"},
      {"agency.belief", "exact", "belief when no belief input: exact | uniform"},
      {"starc.normalizer", "L2", "L1 | L2 | return_range"},
      {"starc.distance", "L2", "L1 | L2"},
      {"starc.weighting", "transition_weighted", "unweighted | transition_weighted"},
      {"starc.tol", 1e-10, "policy-evaluation tolerance and triviality threshold"},
      {"measure.n", 3, "cube dimension"},
      {"measure.bound_m", 1.0, "cube bound M"},
      {"measure.epsilon", 0.1, "tube half-width"},
      {"measure.ideal", 0.5, "constant value of f_ideal"},
      {"measure.f_ideal", nullptr, "explicit f_ideal array (overrides n and ideal)"},
      {"measure.log10_epsilon", nullptr, "log10 tube half-width; selects the closed form"},
      {"measure.samples", 0, "Monte Carlo samples (0 disables)"},
      {"measure.workers", 1, "Monte Carlo worker threads"},
      {"convergence.depth_l", 20, "network depth L"},
      {"convergence.params_n", 1e10, "parameter count N"},
      {"convergence.log10_params_n", nullptr, "log10 N (overrides params_n)"},
      {"convergence.nc_base", "natural", "log base of log(1/eps): natural | ten"},
      {"rates.dim_d", 1e6, "dimension d"},
      {"rates.sparsity_s", 10.0, "sparsity s"},
      {"rates.iterations_t", 100.0, "iterations T"},
  };
  return table;
}

std::vector<std::string> command_groups(Command command) {
  switch (command) {
    case Command::curiosity: return {"curiosity"};
    case Command::empowerment: return {"env", "empowerment"};
    case Command::agency_reward: return {"env", "empowerment", "agency"};
    case Command::starc_distance: return {"env", "reward", "starc"};
    case Command::agency_metric: return {"env", "reward", "empowerment", "agency", "starc"};
    case Command::measure: return {"measure"};
    case Command::convergence: return {"convergence"};
    case Command::rates: return {"rates"};
  }
  return {};
}

std::vector<std::string> command_input_roles(Command command) {
  switch (command) {
    case Command::curiosity: return {"p", "q"};
    case Command::empowerment: return {"mdp"};
    case Command::agency_reward: return {"mdp", "belief", "mesa"};
    case Command::starc_distance: return {"mdp", "reward_f", "reward_a", "policy"};
    case Command::agency_metric: return {"mdp", "candidate", "belief", "mesa", "policy"};
    case Command::measure: return {"cube", "basis"};
    case Command::convergence:
    case Command::rates: return {};
  }
  return {};
}

Json resolve_settings(const RunConfig& config) {
  const auto groups = command_groups(config.command);
  for (const auto& [key, value] : config.overrides) {
    if (!find_setting(key)) throw ValidationError("unknown setting '" + key + "'");
    if (!in_surface(key, groups)) {
      throw ValidationError("setting '" + key + "' does not apply to command '" +
                            std::string(to_string(config.command)) + "'");
    }
  }
  Json resolved = Json::object();
  for (const auto& setting : settings_table()) {
    if (!in_surface(setting.key, groups)) continue;
    const auto it = config.overrides.find(setting.key);
    resolved[setting.key] = it != config.overrides.end() ? it->second : setting.default_value;
  }
  return resolved;
}

std::pair<std::string, Json> parse_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ValidationError("expected key=value, got '" + std::string(text) + "'");
  }
  std::string key(text.substr(0, eq));
  const std::string raw(text.substr(eq + 1));
  Json value = Json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  return {std::move(key), std::move(value)};
}

RunConfig config_from_json(const Json& doc) {
  const Json& cfg = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
  try {
    RunConfig config;
    config.command = parse_command(cfg.at("command").get<std::string>());
    config.seed = cfg.value("seed", std::uint64_t{0});
    if (cfg.contains("inputs")) {
      for (const auto& [role, path] : cfg.at("inputs").items()) {
        config.inputs[role] = path.get<std::string>();
      }
    }
    if (cfg.contains("set")) {
      for (const auto& [key, value] : cfg.at("set").items()) config.overrides[key] = value;
    }
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

Json run_report(const RunConfig& config) {
  const auto roles = command_input_roles(config.command);
  for (const auto& [role, path] : config.inputs) {
    if (std::find(roles.begin(), roles.end(), role) == roles.end()) {
      throw ValidationError("input role '" + role + "' does not apply to command '" +
                            std::string(to_string(config.command)) + "'");
    }
  }
  const Json resolved = resolve_settings(config);
  Json report;
  report["command"] = std::string(to_string(config.command));
  report["version"] = AGENCY_VERSION;
  report["seed"] = config.seed;
  Json cfg;
  cfg["command"] = std::string(to_string(config.command));
  cfg["seed"] = config.seed;
  cfg["inputs"] = Json::object();
  for (const auto& [role, path] : config.inputs) cfg["inputs"][role] = path;
  cfg["set"] = resolved;
  report["config"] = std::move(cfg);
  report["results"] = dispatch(config, Settings(resolved));
  return report;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::file_not_found: return 3;
    case ErrorKind::parse: return 4;
    case ErrorKind::validation: return 5;
    case ErrorKind::dimension: return 6;
    case ErrorKind::domain: return 7;
    case ErrorKind::singularity: return 8;
    case ErrorKind::resource: return 9;
    case ErrorKind::iteration_limit: return 10;
  }
  return kExitInternal;
}

Json error_object(const Error& error) {
  Json body;
  body["kind"] = std::string(to_string(error.kind()));
  body["message"] = error.what();
  body["exit_code"] = exit_code(error.kind());
  if (const auto* limit = dynamic_cast<const IterationLimitError*>(&error)) {
    body["last_gap"] = limit->last_gap();
  }
  Json out;
  out["error"] = std::move(body);
  return out;
}

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    body();
    return 0;
  } catch (const Error& e) {
    err << error_object(e).dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    Json body_json;
    body_json["error"] = {
        {"kind", "internal"}, {"message", e.what()}, {"exit_code", kExitInternal}};
    err << body_json.dump() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Json report = run_report(config);
    if (config.timestamp) report["timestamp"] = utc_timestamp();
    const std::string text = config.format == OutputFormat::csv
                                 ? results_to_csv(report.at("results"))
                                 : report.dump(2) + "\n";
    write_text(config, out, text);
  });
}

int execute_sweep(const RunConfig& config, const std::string& parameter,
                  const std::vector<Json>& values, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { write_text(config, out, emit_sweep(config, parameter, values)); });
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string results_to_csv(const Json& results) {
  std::vector<std::pair<std::string, std::string>> cells;
  flatten_scalars(results, "", cells);
  std::string header;
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    header += (i ? "," : "") + csv_cell(cells[i].first);
    row += (i ? "," : "") + csv_cell(cells[i].second);
  }
  return header + "\n" + row + "\n";
}

std::vector<Json> parse_sweep_values(std::string_view text) {
  std::vector<Json> values;
  const auto dots = text.find("..");
  if (dots != std::string_view::npos) {
    long long lo = 0;
    long long hi = 0;
    const auto a = text.substr(0, dots);
    const auto b = text.substr(dots + 2);
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), lo);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), hi);
    if (ra.ec != std::errc{} || rb.ec != std::errc{} || ra.ptr != a.data() + a.size() ||
        rb.ptr != b.data() + b.size() || hi < lo) {
      throw ValidationError("bad sweep range '" + std::string(text) + "'");
    }
    for (long long v = lo; v <= hi; ++v) values.emplace_back(v);
    return values;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.size() - start
                                                                          : comma - start);
    if (piece.empty()) throw ValidationError("empty sweep value in '" + std::string(text) + "'");
    values.push_back(parse_assignment("v=" + std::string(piece)).second);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return values;
}

std::string emit_sweep(const RunConfig& config, const std::string& parameter,
                       const std::vector<Json>& values) {
  if (!find_setting(parameter) || !in_surface(parameter, command_groups(config.command))) {
    throw ValidationError("cannot sweep '" + parameter + "' for command '" +
                          std::string(to_string(config.command)) + "'");
  }
  if (values.empty()) throw ValidationError("sweep needs at least one value");

  std::vector<std::string> columns;
  std::ostringstream body;
  for (const auto& value : values) {
    RunConfig point = config;
    point.overrides[parameter] = value;
    const Json report = run_report(point);
    std::vector<std::pair<std::string, std::string>> cells;
    flatten_scalars(report.at("results"), "", cells);
    if (columns.empty()) {
      for (const auto& cell : cells) columns.push_back(cell.first);
    }
    body << csv_cell(json_cell(value));
    for (const auto& column : columns) {
      const auto it = std::find_if(cells.begin(), cells.end(),
                                   [&](const auto& c) { return c.first == column; });
      body << "," << (it == cells.end() ? "" : csv_cell(it->second));
    }
    body << "\n";
  }
  std::string header = csv_cell(parameter);
  for (const auto& column : columns) header += "," + csv_cell(column);
  return header + "\n" + body.str();
}

}  // namespace agency
