#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "retailsim/engine.hpp"
#include "retailsim/metrics.hpp"
#include "retailsim/random.hpp"

namespace retailsim {

/// Raised when the model reaches a state its rules do not allow. Aborts the
/// replication.
class ModelBug : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};
class IllegalTransition : public ModelBug {
  public:
    using ModelBug::ModelBug;
};
class DoubleAssign : public ModelBug {
  public:
    using ModelBug::ModelBug;
};
class EndWhileIdle : public ModelBug {
  public:
    using ModelBug::ModelBug;
};

// ---------------------------------------------------------------------------
// Customer statechart

enum class CustomerState : std::uint8_t {
    Contemplating,
    Browsing,
    SeekingHelp,
    WaitingForHelp,
    BeingHelped,
    QueueingAtTill,
    Paying,
    SeekingRefund,
    WaitingForRefund,
    RefundProcessing,
    Left,
};
inline constexpr int kCustomerStateCount = 11;

enum class ExitOutcome : std::uint8_t {
    Purchased,
    NoPurchase,
    RenegedHelp,
    RenegedTill,
    RenegedRefund,
    RefundDone,
};
inline constexpr int kExitOutcomeCount = 6;

enum class Trigger : std::uint8_t {
    Entered,
    BrowseDone,
    Queued,  // no qualified staff free; the customer joins a queue
    HelpAssigned,
    ServiceDone,
    PatienceExpired,
    TillAssigned,
    PaymentDone,
    RefundAssigned,
    RefundResolved,
};
inline constexpr int kTriggerCount = 10;

/// Outcome of a random choice drawn by the caller before a transition.
enum class Decision : std::uint8_t {
    None,
    SeekHelp,
    GoToTill,
    Leave,
    Rebrowse,
    Approved,
    Denied,
};

const char* to_string(CustomerState s);
const char* to_string(ExitOutcome o);
const char* to_string(Trigger t);
const char* to_string(Decision d);

enum class Expertise : std::uint8_t { Normal, Expert };

struct Patience {
    double help = 8.0;
    double till = 8.0;
    double refund = 8.0;
};

/// Behavioural probabilities of a department's customers.
struct NeedProfile {
    double p_help = 0.55;
    double p_direct_till = 0.25;
    double p_leave_after_browse = 0.20;
    double p_rebrowse_while_waiting = 0.2;
    double p_refund_visit = 0.09;
    double p_expert_needed = 0.25;
    double p_buy_after_help = 0.45;

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
    bool operator==(const NeedProfile&) const = default;
};

struct Customer {
    AgentId id = kNoAgent;
    CustomerState state = CustomerState::Contemplating;
    std::optional<ExitOutcome> outcome;
    SimTime entered_at = 0.0;
    Patience patience;
    NeedProfile need_profile;
    Expertise required_expertise = Expertise::Normal;
    bool refund_visit = false;
    double item_value = 0.0;
    // set while the customer sits in a queue
    bool waiting = false;
};

enum class ActionKind : std::uint8_t {
    ScheduleBrowse,
    RequestHelp,
    RequestPayment,
    RequestRefund,
    Record,
    Exit,
};

struct Action {
    ActionKind kind;
    MetricKind metric = MetricKind::ServedImmediately;  // only for Record

    bool operator==(const Action&) const = default;
};

struct Stimulus {
    Trigger trigger;
    Decision decision = Decision::None;
};

/// Applies one statechart edge. Throws IllegalTransition when (state,
/// trigger, decision) is not an edge of the chart; Left is absorbing.
std::vector<Action> customer_transition(Customer& c, Stimulus s);

/// Decisions accepted for (state, trigger); empty when the pair is not an
/// edge. {Decision::None} marks an edge that needs no decision.
std::vector<Decision> legal_decisions(CustomerState state, Trigger trigger);

enum class BrowseOutcome : std::uint8_t { SeekHelp, GoToTill, Leave };

// Requires c.state == Browsing.
BrowseOutcome post_browse_branch(const Customer& c, RngStream& branching);

// ---------------------------------------------------------------------------
// Staff

enum class StaffRole : std::uint8_t { Cashier, NormalSeller, ExpertSeller, SectionManager };
const char* to_string(StaffRole r);

enum class TaskKind : std::uint8_t {
    Help,            // seller advising a customer
    Payment,         // cashier taking payment
    Refund,          // cashier handling a refund (including waiting on an expert)
    RefundReferral,  // expert deciding a refund referred by a cashier
    Shadow,          // normal seller observing an expert
};
const char* to_string(TaskKind k);

struct Task {
    AgentId customer = kNoAgent;
    TaskKind kind = TaskKind::Help;
};

struct Staff {
    AgentId id = kNoAgent;
    StaffRole role = StaffRole::NormalSeller;
    StaffRole initial_role = StaffRole::NormalSeller;
    std::int64_t knowledge_points = 0;
    bool busy = false;
    double busy_minutes = 0.0;
    SimTime busy_since = 0.0;
    SimTime idle_since = 0.0;
    std::optional<Task> current_task;
    // when the current role began, and busy minutes accrued before it
    SimTime role_since = 0.0;
    double busy_before_role = 0.0;

    // busy minutes including an ongoing task, evaluated at t
    double busy_minutes_at(SimTime t) const { return busy ? busy_minutes + (t - busy_since) : busy_minutes; }
};

// Throws DoubleAssign.
void staff_begin(Staff& s, Task task, SimTime t);
// Throws EndWhileIdle.
Task staff_end(Staff& s, SimTime t);

struct PracticeLevers {
    double empowerment = 0.0;
    double empower_to_learn = 0.0;
    double competence_threshold = 1.0;
    std::int64_t knowledge_scale = 100;
    std::int64_t points_per_episode = 1;
    double cashier_refund_approval = 0.8;
    double expert_refund_approval = 0.7;

    std::int64_t promotion_points() const;
    void validate() const;
    bool operator==(const PracticeLevers&) const = default;
};

enum class RefundHandler : std::uint8_t { CashierAutonomous, ReferToExpert };

RefundHandler refund_routing(const PracticeLevers& levers, RngStream& rng);
bool refund_decision(RefundHandler handler, const PracticeLevers& levers, RngStream& rng);

/// Whether a normal seller who has called an expert over stays to observe.
/// Requires normal.role == NormalSeller and expert.role == ExpertSeller.
bool learning_episode(const Staff& normal, const Staff& expert, const PracticeLevers& levers,
                      RngStream& rng);

/// Promotes a normal seller whose points reached the threshold. Returns
/// whether the promotion happened in this call.
bool promotion_check(Staff& s, const PracticeLevers& levers);

}  // namespace retailsim
