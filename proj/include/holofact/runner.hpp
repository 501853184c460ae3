#pragma once

#include <string>

#include "holofact/json_io.hpp"

// Batch front door: JSON configuration in, JSON/CSV artifacts out. Strict
// schema (unknown keys rejected), deterministic outputs, exit codes
// 0 = ok, 1 = domain error (error record still written), 2 = schema error.

namespace holofact::runner {

inline constexpr const char* kToolVersion = "holofact 0.1.0";

enum class Command { Solve, Atlas, Radius, Factor, Ng, Asym, MaxMod, Recursion };

struct RunConfig {
  Command command;
  io::json params;       // validated, defaults filled
  std::string raw_text;  // hashed for provenance
};

const char* command_name(Command c);

// FNV-1a over the raw configuration bytes, hex encoded
std::string config_hash(const std::string& text);

RunConfig parse_config(const std::string& text);

struct RunOutcome {
  int exit_code = 0;
  std::string result_path;
  std::vector<std::string> extra_files;
};

RunOutcome run_command(const RunConfig& cfg, const std::string& out_dir);

// JSON skeleton for `schema <command>`; throws SchemaError on unknown names
std::string schema_text(const std::string& command);

}  // namespace holofact::runner
