#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relect/protocol.hpp"
#include "relect/report.hpp"

namespace relect {

enum class Command : std::uint8_t { Simulate, AnalyzeConstants, AnalyzeCost, Sweep, Verify };

struct CliConfig {
    Command command = Command::Simulate;
    Protocol protocol = Protocol::Alg1;
    std::vector<int> n_values{1024};
    std::vector<double> alpha_values;  // empty = protocol default
    int k_start = 1;
    int max_rounds = 64;
    int trials = 1000;
    std::uint64_t seed = 0;
    double q = 0.6305;          // analyze cost
    int cost_samples = 25;      // alpha grid for analyze cost
    OutputFormat format = OutputFormat::Csv;
    std::optional<std::string> output_path;
    int workers = 0;  // 0 = auto; RADIO_ELECT_WORKERS overrides
};

// Parses and validates; throws UsageError with an actionable message.
CliConfig parse_args(const std::vector<std::string>& argv);

// Runs the parsed command. Returns the process exit status:
// 0 ok, 3 verification failure. UsageError (1) and runtime errors (2) are
// thrown and mapped by the caller.
int execute(const CliConfig& config);

}  // namespace relect
