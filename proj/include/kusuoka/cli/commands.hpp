#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kusuoka/cli/config.hpp"

namespace kusuoka::cli {

inline constexpr int kSchemaVersion = 1;

enum class Format { Csv, Json };

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct CommandResult {
  nlohmann::json summary;
  std::vector<Table> tables;
};

struct RuntimeOptions {
  int workers = 1;
  std::optional<std::uint64_t> seed;
};

/// Names accepted by run_command.
const std::vector<std::string>& command_names();

/// Runs one command; throws the module exceptions unchanged.
CommandResult run_command(const std::string& command, const RunConfig& config, const RuntimeOptions& runtime);

CommandResult cmd_solve(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_count(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_zeta(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_variational(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_lyapunov(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_root(const RunConfig& config, const RuntimeOptions& runtime);
CommandResult cmd_scanline(const RunConfig& config, const RuntimeOptions& runtime);

/// CSV with a header row and every number printed with 17 significant digits.
std::string to_csv(const Table& table);
nlohmann::json to_json(const Table& table);

/// Writes <command>_summary.json and one <table>.csv per table for Format::Csv, or a single
/// <command>.json holding the summary and all tables for Format::Json.
void write_outputs(const std::string& command, const CommandResult& result, const std::filesystem::path& dir,
                   Format format);

struct Invocation {
  std::string command;
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  int workers = 1;
  Format format = Format::Csv;
};

/// Loads the config, runs the command, writes outputs and prints the summary to out.
/// Returns 0 on success, 1 for configuration, argument and budget errors, 2 for numerical failures.
int execute(const Invocation& inv, std::ostream& out, std::ostream& err);

}  // namespace kusuoka::cli
