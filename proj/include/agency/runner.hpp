#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "agency/errors.hpp"
#include "agency/serialize.hpp"

namespace agency {

enum class Command {
  curiosity,
  empowerment,
  agency_reward,
  starc_distance,
  agency_metric,
  measure,
  convergence,
  rates,
};

std::string_view to_string(Command command);
Command parse_command(std::string_view text);
const std::vector<Command>& all_commands();

enum class OutputFormat { json, csv };

/// One CLI invocation. `overrides` holds flat dotted keys (e.g.
/// "starc.normalizer") applied over the defaults table.
struct RunConfig {
  Command command = Command::convergence;
  std::map<std::string, std::string> inputs;
  std::optional<std::string> output_path;
  std::uint64_t seed = 0;
  std::map<std::string, Json> overrides;
  bool timestamp = true;
  OutputFormat format = OutputFormat::json;
};

struct Setting {
  std::string key;
  Json default_value;
  std::string help;
};

/// Every configurable key with its default; the single source of defaults.
const std::vector<Setting>& settings_table();

/// Setting-key groups and input roles a command reads.
std::vector<std::string> command_groups(Command command);
std::vector<std::string> command_input_roles(Command command);

/// Defaults for the command's surface overlaid with `config.overrides`.
/// Rejects keys outside the surface.
Json resolve_settings(const RunConfig& config);

/// Parses "key=value"; the value is read as JSON when it parses, else as a string.
std::pair<std::string, Json> parse_assignment(std::string_view text);

/// Builds a RunConfig from a config document: either {"command", "seed",
/// "inputs", "set"} or a previously written report (its "config" member).
RunConfig config_from_json(const Json& doc);

/// Runs the command and returns the report (no timestamp).
Json run_report(const RunConfig& config);

/// Process exit code for each error class; 0 is success.
int exit_code(ErrorKind kind);
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Machine-readable error object.
Json error_object(const Error& error);

/// Runs the command, writes the report to config.output_path (or `out`),
/// writes error objects to `err`, returns the exit status.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// One CSV row per swept value; flattened scalar results as columns, numbers
/// printed with 12 significant digits.
std::string emit_sweep(const RunConfig& config, const std::string& parameter,
                       const std::vector<Json>& values);

/// emit_sweep with execute()'s output and error handling.
int execute_sweep(const RunConfig& config, const std::string& parameter,
                  const std::vector<Json>& values, std::ostream& out, std::ostream& err);

/// Parses "0.1,0.01" or an integer range "1..10" into sweep values.
std::vector<Json> parse_sweep_values(std::string_view text);

/// Flattens scalar members of `results` into a single-row CSV.
std::string results_to_csv(const Json& results);

/// 12-significant-digit rendering used by every CSV writer.
std::string format_number(double value);

}  // namespace agency
