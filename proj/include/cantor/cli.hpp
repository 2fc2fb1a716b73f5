#pragma once

// Batch front end: parse and validate job configs, run the computation,
// and render deterministic reports (JSON document or delimiter-separated
// values). The binary in tools/ is a thin wrapper around run().

#include <string>
#include <vector>

namespace cantor::cli {

struct RunResult {
  int exit_code = 0;
  std::string out;
  std::string err;
};

// argv-style interface: <command> --config <path> [--out <path>]
// [--format dsv|doc] [--tolerance <float>] [--seed <int>].
RunResult run(const std::vector<std::string>& args);

// All schema violations for the given command/config, empty when valid.
std::vector<std::string> validate(const std::string& command, const std::string& config_text);

// Executes a validated config and renders the report. Throws cantor::Error
// on invalid configs (message lists every violation) or runtime failures.
std::string execute(const std::string& command, const std::string& config_text,
                    const std::string& format, double tolerance, unsigned long long seed);

}  // namespace cantor::cli
