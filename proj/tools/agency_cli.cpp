// Command-line front end: one command per invocation, JSON report out.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "agency/runner.hpp"

namespace {

std::string help_footer() {
  std::ostringstream os;
  os << "\nInputs are passed as --set input.<role>=<path>. Roles per command:\n";
  for (auto command : agency::all_commands()) {
    os << "  " << agency::to_string(command) << ":";
    for (const auto& role : agency::command_input_roles(command)) os << " " << role;
    os << "\n";
  }
  os << "\nSettings (key = default):\n";
  for (const auto& s : agency::settings_table()) {
    os << "  " << s.key << " = " << s.default_value.dump() << "  (" << s.help << ")\n";
  }
  os << "\nExit codes:\n"
     << "  0 success\n"
     << "  " << agency::kExitInternal << " internal error\n"
     << "  " << agency::kExitUsage << " usage error\n";
  for (auto kind : {agency::ErrorKind::file_not_found, agency::ErrorKind::parse,
                    agency::ErrorKind::validation, agency::ErrorKind::dimension,
                    agency::ErrorKind::domain, agency::ErrorKind::singularity,
                    agency::ErrorKind::resource, agency::ErrorKind::iteration_limit}) {
    os << "  " << agency::exit_code(kind) << " " << agency::to_string(kind) << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agency metrics: curiosity, empowerment, STARC distances, "
               "epsilon-tube measures and convergence bounds"};
  app.footer(help_footer());

  std::string command_text;
  std::string config_path;
  std::vector<std::string> assignments;
  std::uint64_t seed = 0;
  std::string output_path;
  bool no_timestamp = false;
  std::string format = "json";
  std::string sweep;

  app.add_option("command", command_text,
                 "curiosity | empowerment | agency-reward | starc-distance | "
                 "agency-metric | measure | convergence | rates");
  app.add_option("--config", config_path, "JSON config file or a previous report");
  app.add_option("--set", assignments, "key=value override (repeatable)")->take_all();
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--output", output_path, "write the report here instead of stdout");
  app.add_flag("--no-timestamp", no_timestamp, "omit the timestamp field");
  app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--sweep", sweep, "key=v1,v2,... or key=lo..hi; emits CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : agency::kExitUsage;
  }

  agency::RunConfig config;
  try {
    if (!config_path.empty()) {
      config = agency::config_from_json(agency::read_json_file(config_path));
    } else if (command_text.empty()) {
      std::cerr << "a command or --config is required\n";
      return agency::kExitUsage;
    }
    if (!command_text.empty()) config.command = agency::parse_command(command_text);
    if (seed_opt->count() > 0) config.seed = seed;
    for (const auto& text : assignments) {
      auto [key, value] = agency::parse_assignment(text);
      if (key.rfind("input.", 0) == 0) {
        config.inputs[key.substr(6)] =
            value.is_string() ? value.get<std::string>() : value.dump();
      } else {
        config.overrides[key] = std::move(value);
      }
    }
  } catch (const agency::Error& e) {
    std::cerr << agency::error_object(e).dump() << "\n";
    return agency::exit_code(e.kind());
  }
  if (!output_path.empty()) config.output_path = output_path;
  config.timestamp = !no_timestamp;
  config.format = format == "csv" ? agency::OutputFormat::csv : agency::OutputFormat::json;

  if (!sweep.empty()) {
    try {
      auto eq = sweep.find('=');
      if (eq == std::string::npos) throw agency::ValidationError("--sweep expects key=values");
      return agency::execute_sweep(config, sweep.substr(0, eq),
                                   agency::parse_sweep_values(sweep.substr(eq + 1)),
                                   std::cout, std::cerr);
    } catch (const agency::Error& e) {
      std::cerr << agency::error_object(e).dump() << "\n";
      return agency::exit_code(e.kind());
    }
  }
  return agency::execute(config, std::cout, std::cerr);
}
