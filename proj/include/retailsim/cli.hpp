#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "retailsim/config.hpp"

namespace retailsim {

inline constexpr std::string_view kToolVersion = "1.0.0";
inline constexpr const char* kSeedEnvVar = "RETAILSIM_SEED";

enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitConfig = 2, kExitModelBug = 3 };

struct SimulateArgs {
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_path;  // stdout when absent
};

struct ExperimentArgs {
    std::string name;
    std::optional<std::string> config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> reps;
    unsigned jobs = 1;
    std::string out_dir;
};

struct StatsArgs {
    std::string results_path;
    std::vector<std::string> dependent_vars;
    double family_alpha = 0.05;
    std::optional<int> family_size;  // defaults to dependent_vars.size()
    std::optional<std::string> out_path;
};

/// Base config from an optional file plus dotted overrides, then the seed
/// precedence: explicit flag, then the environment variable, then the config.
/// `seed_source` receives "flag", "env" or "config". Throws ConfigError.
ScenarioConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                              std::optional<std::uint64_t> seed, std::string* seed_source = nullptr);

// Each returns an ExitCode; diagnostics go to `err`.
int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to the commands above.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace retailsim
