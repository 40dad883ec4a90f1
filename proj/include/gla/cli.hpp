#pragma once

// Config-driven command runner behind the `gla` executable.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gla/io.hpp"

namespace gla::cli {

enum ExitCode { kOk = 0, kViolated = 1, kBadConfig = 2, kBudget = 3, kFailure = 4 };

struct Invocation {
  std::string command;            // sample, solve, estimate, scan, critical, verify, oracle
  std::string check = "all";      // verify only
  Json config = Json::object();   // file contents; a manifest is accepted as well
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> mode;
  int jobs = 1;
  bool plot_data = false;
};

struct Outcome {
  int exit_code = kOk;
  std::string out_dir;
  std::vector<std::string> files;  // relative to out_dir, in write order
  std::string message;
};

const std::vector<std::string>& commands();

// Effective config after defaults and overrides; throws SchemaError.
Json effective_config(const Invocation& inv);
std::string config_hash(const Json& effective);

// Never throws; errors map to exit codes and a message.
Outcome run(const Invocation& inv, std::ostream& log);

}  // namespace gla::cli
