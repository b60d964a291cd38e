#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "retailsim/agents.hpp"
#include "retailsim/config.hpp"
#include "retailsim/engine.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/queuing.hpp"
#include "retailsim/random.hpp"

namespace retailsim {

struct SimulationOptions {
    // Off for scripted scenarios that admit customers by hand.
    bool generate_arrivals = true;
};

/// Result of a service request: either a staff member took the customer
/// immediately or the customer joined a queue.
struct ServiceRequestResult {
    std::optional<AgentId> assigned_to;  // the staff member now serving
    std::optional<AgentId> referred_by;  // normal seller who called the expert over
    std::optional<QueueEntry> queued;
};

/// One department for one replication: the event kernel, the staff roster,
/// the customers who have entered, the queues and the metrics ledger.
class Simulation {
  public:
    Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimulationOptions opts = {});

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    /// Runs to the configured horizon and returns the outcome vector.
    Outcome run();
    void run_until(SimTime t) { kernel_.run_until(t); }
    // Requires that the horizon has been reached.
    Outcome finalize() const;

    // -- service matchmaking ------------------------------------------------
    ServiceRequestResult request_service(AgentId customer, ServiceNeed need);
    std::optional<AgentId> on_staff_freed(AgentId staff);
    void renege(AgentId customer);

    // -- scripted scenarios -------------------------------------------------
    // Admits a customer now and fires Entered. Fields id/state/entered_at are
    // overwritten.
    AgentId admit(Customer proto);
    // Admits a customer straight into the seeking state for `need` and
    // requests service.
    AgentId admit_with_need(ServiceNeed need, Patience patience = {});

    // Called after every fired event.
    void set_event_observer(std::function<void(const Event&)> f) { observer_ = std::move(f); }

    // Returns a description of every violated structural invariant; empty
    // when consistent.
    std::vector<std::string> check_invariants() const;

    const ScenarioConfig& config() const { return cfg_; }
    const Kernel& kernel() const { return kernel_; }
    Kernel& kernel() { return kernel_; }
    SimTime now() const { return kernel_.now(); }
    SimTime horizon() const { return horizon_; }
    const std::vector<Staff>& staff() const { return staff_; }
    const std::vector<Customer>& customers() const { return customers_; }
    const MetricsLedger& ledger() const { return ledger_; }
    const ServiceQueues& queues() const { return queues_; }
    std::size_t pending_referrals() const { return referrals_.size(); }

    std::int64_t exits(ExitOutcome o) const { return exits_[static_cast<std::size_t>(o)]; }
    std::int64_t in_system() const { return in_system_; }
    std::int64_t entered() const { return static_cast<std::int64_t>(customers_.size()); }

  private:
    struct ServiceContext {
        AgentId server = kNoAgent;   // seller, cashier or deciding expert
        AgentId learner = kNoAgent;  // normal seller shadowing the expert
        AgentId cashier = kNoAgent;  // cashier holding a referred refund
        std::optional<RefundHandler> refund_handler;
    };

    void dispatch(const Event& e);
    void on_arrival();
    void on_browse_done(AgentId c);
    void on_service_done(AgentId c);

    void apply(AgentId c, Stimulus s);
    QueueEntry enqueue(AgentId c, ServiceNeed need);
    void start_help(AgentId c, AgentId seller);
    void start_payment(AgentId c, AgentId cashier);
    void start_refund(AgentId c, AgentId cashier);
    void start_referral(AgentId c, AgentId expert);
    void serve_entry(AgentId staff, const QueueEntry& e);
    AgentId new_customer();

    ScenarioConfig cfg_;
    SimTime horizon_;
    SimulationOptions opts_;
    Kernel kernel_;

    RngStream rng_arrivals_;
    RngStream rng_intent_;
    RngStream rng_patience_;
    RngStream rng_browsing_;
    RngStream rng_branching_;
    RngStream rng_service_;
    RngStream rng_refund_routing_;
    RngStream rng_refund_decisions_;
    RngStream rng_learning_;
    RngStream rng_values_;

    std::vector<Staff> staff_;
    std::vector<Customer> customers_;
    std::vector<ServiceContext> context_;
    ServiceQueues queues_;
    std::deque<AgentId> referrals_;  // referred refunds waiting for an expert
    MetricsLedger ledger_;

    std::array<std::int64_t, kExitOutcomeCount> exits_{};
    std::int64_t in_system_ = 0;
    std::int64_t reneged_help_ = 0;
    std::int64_t reneged_till_ = 0;
    std::int64_t reneged_refund_ = 0;
    std::int64_t learning_episodes_ = 0;
    std::int64_t promotions_ = 0;
    double revenue_ = 0.0;
    bool horizon_reached_ = false;

    std::function<void(const Event&)> observer_;
};

}  // namespace retailsim
