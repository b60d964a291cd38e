#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retailsim/config.hpp"
#include "retailsim/metrics.hpp"

namespace retailsim {

enum class Lever : std::uint8_t { Empowerment, EmpowerToLearn, CompetenceThreshold };
std::string_view to_string(Lever l);

/// Returns a copy of cfg with only the lever field changed.
ScenarioConfig with_lever(ScenarioConfig cfg, Lever lever, double value);

struct SweepSpec {
    std::string name;
    Lever lever = Lever::Empowerment;
    std::vector<double> levels;
    std::uint32_t replications = 20;
    ScenarioConfig base;
    // outcome columns analysed by default
    std::vector<std::string> dependent_vars;
    // divisor for the post-hoc alpha
    int n_dependent_vars = 3;

    void validate() const;
};

/// Preset sweeps: "empowerment", "learning", "development". Throws
/// std::invalid_argument for other names.
SweepSpec preset(std::string_view name, const ScenarioConfig& base = default_config());
const std::vector<std::string>& preset_names();

/// One deterministic replication. The seed is derived from
/// (cfg.master_seed, level, rep_index).
ReplicationResult run_replication(const ScenarioConfig& cfg, std::uint32_t rep_index, double level = 0.0);

/// Runs levels x replications on up to `jobs` threads; the result is
/// ordered by (level index, rep) regardless of jobs.
std::vector<ReplicationResult> run_sweep(const SweepSpec& spec, unsigned jobs = 1);

struct Descriptive {
    std::size_t n = 0;  // observations present
    std::optional<double> mean;
    std::optional<double> sd;
    bool sd_undefined = false;  // n == 1: sd reported as 0
};

struct LevelSummary {
    double level = 0.0;
    std::vector<Descriptive> columns;  // parallel to the requested columns
};

/// Per-level mean and sample SD for each named outcome column. Levels keep
/// their first-appearance order.
std::vector<LevelSummary> summarize(const std::vector<ReplicationResult>& results,
                                    const std::vector<std::string>& columns);

}  // namespace retailsim
