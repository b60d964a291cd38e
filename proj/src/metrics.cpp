#include "retailsim/metrics.hpp"

#include <cmath>

namespace retailsim {

namespace {
constexpr std::array<std::string_view, kMetricKindCount> kNames = {
    "served_immediately", "served_after_wait", "left_queue",          "purchase_completed",
    "refund_granted",     "refund_denied",     "refund_referred_wait",
};
}  // namespace

std::string_view metric_name(MetricKind k) { return kNames[static_cast<std::size_t>(k)]; }

bool is_refund_kind(MetricKind k) {
    return k == MetricKind::RefundGranted || k == MetricKind::RefundDenied ||
           k == MetricKind::RefundReferredWait;
}

MetricKind metric_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<MetricKind>(i);
    }
    throw UnknownKind("unknown metric event kind '" + std::string(name) + "'");
}

void SatisfactionWeights::validate() const {
    bool any_negative = false;
    for (auto k : kAllMetricKinds) {
        if (!std::isfinite((*this)[k])) {
            throw std::invalid_argument("weight for " + std::string(metric_name(k)) +
                                        " is not finite");
        }
        any_negative = any_negative || (*this)[k] < 0.0;
    }
    if (!any_negative) throw std::invalid_argument("at least one weight must be negative");
}

double utilization(std::span<const double> busy_minutes, double scheduled_minutes) {
    if (!(scheduled_minutes > 0.0)) throw std::invalid_argument("scheduled minutes must be > 0");
    if (busy_minutes.empty()) throw EmptyClass("role class has no members");
    double sum = 0.0;
    for (double b : busy_minutes) sum += b / scheduled_minutes;
    return sum / static_cast<double>(busy_minutes.size());
}

double utilization(std::span<const double> busy_minutes, std::span<const double> scheduled_minutes) {
    if (busy_minutes.size() != scheduled_minutes.size()) throw std::invalid_argument("busy/scheduled size mismatch");
    if (busy_minutes.empty()) throw EmptyClass("role class has no members");
    double busy = 0.0;
    double scheduled = 0.0;
    for (std::size_t i = 0; i < busy_minutes.size(); ++i) {
        busy += busy_minutes[i];
        scheduled += scheduled_minutes[i];
    }
    if (!(scheduled > 0.0)) throw std::invalid_argument("scheduled minutes must be > 0");
    return busy / scheduled;
}

void MetricsLedger::record(MetricKind k) {
    ++counts_[static_cast<std::size_t>(k)];
    overall_ += weights_[k];
    if (is_refund_kind(k)) refund_ += weights_[k];
}

double MetricsLedger::recomputed_overall() const {
    double s = 0.0;
    for (auto k : kAllMetricKinds) s += static_cast<double>(count(k)) * weights_[k];
    return s;
}

double MetricsLedger::recomputed_refund() const {
    double s = 0.0;
    for (auto k : kAllMetricKinds) {
        if (is_refund_kind(k)) s += static_cast<double>(count(k)) * weights_[k];
    }
    return s;
}

const std::vector<std::string>& outcome_columns() {
    static const std::vector<std::string> cols = {
        "transactions",     "overall_satisfaction", "refund_satisfaction", "mean_normal_expertise",
        "normal_utilization", "expert_utilization", "reneged_help",        "reneged_till",
        "reneged_refund",   "entered",              "in_system",           "refunds_granted",
        "refunds_denied",   "refunds_referred",     "learning_episodes",   "promotions",
        "revenue",
    };
    return cols;
}

std::optional<double> outcome_value(const Outcome& o, std::string_view c) {
    auto d = [](std::int64_t v) { return std::optional<double>(static_cast<double>(v)); };
    if (c == "transactions") return d(o.transactions);
    if (c == "overall_satisfaction") return o.overall_satisfaction;
    if (c == "refund_satisfaction") return o.refund_satisfaction;
    if (c == "mean_normal_expertise") return o.mean_normal_expertise;
    if (c == "normal_utilization") return o.normal_utilization;
    if (c == "expert_utilization") return o.expert_utilization;
    if (c == "reneged_help") return d(o.reneged_help);
    if (c == "reneged_till") return d(o.reneged_till);
    if (c == "reneged_refund") return d(o.reneged_refund);
    if (c == "entered") return d(o.entered);
    if (c == "in_system") return d(o.in_system);
    if (c == "refunds_granted") return d(o.refunds_granted);
    if (c == "refunds_denied") return d(o.refunds_denied);
    if (c == "refunds_referred") return d(o.refunds_referred);
    if (c == "learning_episodes") return d(o.learning_episodes);
    if (c == "promotions") return d(o.promotions);
    if (c == "revenue") return o.revenue;
    throw std::invalid_argument("unknown outcome column '" + std::string(c) + "'");
}

}  // namespace retailsim
