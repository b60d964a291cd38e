#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "retailsim/agents.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/queuing.hpp"
#include "retailsim/random.hpp"

namespace retailsim {

/// Invalid configuration. field() holds the dotted path of the offending key.
class ConfigError : public std::runtime_error {
  public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

  private:
    std::string field_;
};

enum class Department : std::uint8_t { AudioTelevision, Womenswear };
std::string_view to_string(Department d);

struct Staffing {
    int cashiers = 3;
    int normal_sellers = 7;
    int experts = 2;
    int section_managers = 1;
    bool operator==(const Staffing&) const = default;
};

/// Open time only; closed hours are not simulated.
struct Calendar {
    double weeks = 10.0;
    double days_per_week = 7.0;
    double hours_per_day = 8.0;

    double horizon_minutes() const { return weeks * days_per_week * hours_per_day * 60.0; }
    bool operator==(const Calendar&) const = default;
};

struct Timing {
    Distribution browse = Distribution::triangular(1, 5, 15);
    Distribution patience_help = Distribution::exponential(12);
    Distribution patience_till = Distribution::exponential(8);
    Distribution patience_refund = Distribution::exponential(8);
    Distribution help_service = Distribution::triangular(3, 8, 20);
    // help for customers whose question needs an expert
    Distribution expert_help_service = Distribution::triangular(10, 25, 45);
    Distribution payment = Distribution::triangular(1, 2, 4);
    Distribution refund_cashier = Distribution::triangular(6, 11, 22);
    Distribution refund_expert = Distribution::triangular(0.25, 0.5, 1);
    Distribution item_value = Distribution::triangular(50, 200, 1000);
    bool operator==(const Timing&) const = default;
};

struct ScenarioConfig {
    Staffing staffing;
    double arrival_rate = 70.0;  // customers per hour
    Calendar calendar;
    Department department = Department::AudioTelevision;
    PracticeLevers levers;
    SatisfactionWeights weights;
    NeedProfile customers;
    Timing timing;
    QueueDiscipline queue_discipline = QueueDiscipline::LongestWaitFirst;
    SellerSelection seller_selection = SellerSelection::LongestIdleFirst;
    std::uint64_t master_seed = 20070601;

    // Throws ConfigError.
    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

/// Defaults for a department; customer behaviour and service times differ.
ScenarioConfig default_config(Department d = Department::AudioTelevision);

nlohmann::json to_json(const ScenarioConfig& cfg);
// Strict: unknown keys and bad values raise ConfigError. Missing keys keep
// the department's defaults.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);

/// Applies "a.b.c=value" to a config document. The value is parsed as JSON
/// when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, std::string_view assignment);

std::string canonical_json(const ScenarioConfig& cfg);
/// Hex FNV-1a digest of the canonical serialization.
std::string config_digest(const ScenarioConfig& cfg);

nlohmann::json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const nlohmann::json& j, const std::string& field);

}  // namespace retailsim
