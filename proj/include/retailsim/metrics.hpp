#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace retailsim {

/// Customer-experience events that feed the service-level index.
enum class MetricKind : std::uint8_t {
    ServedImmediately,
    ServedAfterWait,
    LeftQueue,
    PurchaseCompleted,
    RefundGranted,
    RefundDenied,
    RefundReferredWait,
};
inline constexpr std::size_t kMetricKindCount = 7;

inline constexpr std::array<MetricKind, kMetricKindCount> kAllMetricKinds = {
    MetricKind::ServedImmediately, MetricKind::ServedAfterWait,  MetricKind::LeftQueue,
    MetricKind::PurchaseCompleted, MetricKind::RefundGranted,    MetricKind::RefundDenied,
    MetricKind::RefundReferredWait,
};

std::string_view metric_name(MetricKind k);
bool is_refund_kind(MetricKind k);

class UnknownKind : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Throws UnknownKind.
MetricKind metric_from_name(std::string_view name);

struct SatisfactionWeights {
    std::array<double, kMetricKindCount> w{2.0, 1.0, -3.0, 1.0, 3.0, -4.0, -3.0};

    double operator[](MetricKind k) const { return w[static_cast<std::size_t>(k)]; }
    double& operator[](MetricKind k) { return w[static_cast<std::size_t>(k)]; }

    // Finite weights with at least one negative kind.
    void validate() const;

    bool operator==(const SatisfactionWeights&) const = default;
};

class EmptyClass : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Mean of busy/scheduled over a role class. Throws EmptyClass when the class
/// has no members.
double utilization(std::span<const double> busy_minutes, double scheduled_minutes);
/// Pooled utilization when members were scheduled for different spans:
/// sum(busy) / sum(scheduled). Throws EmptyClass or std::invalid_argument.
double utilization(std::span<const double> busy_minutes, std::span<const double> scheduled_minutes);

/// Running counters and weighted sums for one replication.
class MetricsLedger {
  public:
    explicit MetricsLedger(SatisfactionWeights weights = {}) : weights_(weights) {}

    void record(MetricKind k);
    // Throws UnknownKind.
    void record(std::string_view kind_name) { record(metric_from_name(kind_name)); }

    const SatisfactionWeights& weights() const { return weights_; }
    std::uint64_t count(MetricKind k) const { return counts_[static_cast<std::size_t>(k)]; }
    double overall_satisfaction() const { return overall_; }
    double refund_satisfaction() const { return refund_; }
    std::uint64_t transactions() const { return count(MetricKind::PurchaseCompleted); }

    // Sum of count x weight, recomputed from the counters.
    double recomputed_overall() const;
    double recomputed_refund() const;

  private:
    SatisfactionWeights weights_;
    std::array<std::uint64_t, kMetricKindCount> counts_{};
    double overall_ = 0.0;
    double refund_ = 0.0;
};

/// Outcome vector of one replication.
struct Outcome {
    std::int64_t transactions = 0;
    double overall_satisfaction = 0.0;
    double refund_satisfaction = 0.0;
    std::optional<double> mean_normal_expertise;
    std::optional<double> normal_utilization;
    std::optional<double> expert_utilization;
    std::int64_t reneged_help = 0;
    std::int64_t reneged_till = 0;
    std::int64_t reneged_refund = 0;

    std::int64_t entered = 0;
    std::int64_t in_system = 0;
    std::int64_t refunds_granted = 0;
    std::int64_t refunds_denied = 0;
    std::int64_t refunds_referred = 0;
    std::int64_t learning_episodes = 0;
    std::int64_t promotions = 0;
    double revenue = 0.0;

    bool operator==(const Outcome&) const = default;
};

struct ReplicationResult {
    double level = 0.0;
    std::uint32_t rep = 0;
    std::uint64_t seed = 0;
    Outcome outcome;

    bool operator==(const ReplicationResult&) const = default;
};

/// Names of the outcome columns that can be analysed, in CSV order.
const std::vector<std::string>& outcome_columns();

// Value of a named outcome column; nullopt when absent. Throws
// std::invalid_argument for an unknown column.
std::optional<double> outcome_value(const Outcome& o, std::string_view column);

}  // namespace retailsim
