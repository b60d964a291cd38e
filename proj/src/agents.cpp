#include "retailsim/agents.hpp"

#include <cmath>
#include <string>

namespace retailsim {

const char* to_string(CustomerState s) {
    switch (s) {
        case CustomerState::Contemplating: return "Contemplating";
        case CustomerState::Browsing: return "Browsing";
        case CustomerState::SeekingHelp: return "SeekingHelp";
        case CustomerState::WaitingForHelp: return "WaitingForHelp";
        case CustomerState::BeingHelped: return "BeingHelped";
        case CustomerState::QueueingAtTill: return "QueueingAtTill";
        case CustomerState::Paying: return "Paying";
        case CustomerState::SeekingRefund: return "SeekingRefund";
        case CustomerState::WaitingForRefund: return "WaitingForRefund";
        case CustomerState::RefundProcessing: return "RefundProcessing";
        case CustomerState::Left: return "Left";
    }
    return "?";
}

const char* to_string(ExitOutcome o) {
    switch (o) {
        case ExitOutcome::Purchased: return "Purchased";
        case ExitOutcome::NoPurchase: return "NoPurchase";
        case ExitOutcome::RenegedHelp: return "RenegedHelp";
        case ExitOutcome::RenegedTill: return "RenegedTill";
        case ExitOutcome::RenegedRefund: return "RenegedRefund";
        case ExitOutcome::RefundDone: return "RefundDone";
    }
    return "?";
}

const char* to_string(Trigger t) {
    switch (t) {
        case Trigger::Entered: return "Entered";
        case Trigger::BrowseDone: return "BrowseDone";
        case Trigger::Queued: return "Queued";
        case Trigger::HelpAssigned: return "HelpAssigned";
        case Trigger::ServiceDone: return "ServiceDone";
        case Trigger::PatienceExpired: return "PatienceExpired";
        case Trigger::TillAssigned: return "TillAssigned";
        case Trigger::PaymentDone: return "PaymentDone";
        case Trigger::RefundAssigned: return "RefundAssigned";
        case Trigger::RefundResolved: return "RefundResolved";
    }
    return "?";
}

const char* to_string(Decision d) {
    switch (d) {
        case Decision::None: return "None";
        case Decision::SeekHelp: return "SeekHelp";
        case Decision::GoToTill: return "GoToTill";
        case Decision::Leave: return "Leave";
        case Decision::Rebrowse: return "Rebrowse";
        case Decision::Approved: return "Approved";
        case Decision::Denied: return "Denied";
    }
    return "?";
}

const char* to_string(StaffRole r) {
    switch (r) {
        case StaffRole::Cashier: return "Cashier";
        case StaffRole::NormalSeller: return "NormalSeller";
        case StaffRole::ExpertSeller: return "ExpertSeller";
        case StaffRole::SectionManager: return "SectionManager";
    }
    return "?";
}

const char* to_string(TaskKind k) {
    switch (k) {
        case TaskKind::Help: return "Help";
        case TaskKind::Payment: return "Payment";
        case TaskKind::Refund: return "Refund";
        case TaskKind::RefundReferral: return "RefundReferral";
        case TaskKind::Shadow: return "Shadow";
    }
    return "?";
}

void NeedProfile::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
        }
    };
    prob(p_help, "p_help");
    prob(p_direct_till, "p_direct_till");
    prob(p_leave_after_browse, "p_leave_after_browse");
    prob(p_rebrowse_while_waiting, "p_rebrowse_while_waiting");
    prob(p_refund_visit, "p_refund_visit");
    prob(p_expert_needed, "p_expert_needed");
    prob(p_buy_after_help, "p_buy_after_help");
    if (std::abs(p_help + p_direct_till + p_leave_after_browse - 1.0) > 1e-9) {
        throw std::invalid_argument("p_help + p_direct_till + p_leave_after_browse must equal 1");
    }
}

// ---------------------------------------------------------------------------
// Statechart edge set. Every legal (state, trigger, decision) triple is
// handled here; anything else falls through to nullopt.

namespace {

struct EdgeResult {
    CustomerState to;
    std::optional<ExitOutcome> outcome;
    std::vector<Action> actions;
};

Action record(MetricKind k) { return Action{ActionKind::Record, k}; }
Action act(ActionKind k) { return Action{k}; }

std::optional<EdgeResult> edge(const Customer& c, Stimulus s) {
    using S = CustomerState;
    using T = Trigger;
    using D = Decision;
    const D d = s.decision;
    auto leave = [](ExitOutcome o, std::vector<Action> a) {
        a.push_back(act(ActionKind::Exit));
        return EdgeResult{S::Left, o, std::move(a)};
    };

    switch (c.state) {
        case S::Contemplating:
            if (s.trigger == T::Entered && d == D::None) {
                if (c.refund_visit) return EdgeResult{S::SeekingRefund, {}, {act(ActionKind::RequestRefund)}};
                return EdgeResult{S::Browsing, {}, {act(ActionKind::ScheduleBrowse)}};
            }
            break;
        case S::Browsing:
            if (s.trigger == T::BrowseDone) {
                if (d == D::SeekHelp) return EdgeResult{S::SeekingHelp, {}, {act(ActionKind::RequestHelp)}};
                if (d == D::GoToTill) return EdgeResult{S::QueueingAtTill, {}, {act(ActionKind::RequestPayment)}};
                if (d == D::Leave) return leave(ExitOutcome::NoPurchase, {});
            }
            break;
        case S::SeekingHelp:
            if (s.trigger == T::HelpAssigned && d == D::None) {
                return EdgeResult{S::BeingHelped, {}, {record(MetricKind::ServedImmediately)}};
            }
            if (s.trigger == T::Queued && d == D::None) return EdgeResult{S::WaitingForHelp, {}, {}};
            break;
        case S::WaitingForHelp:
            if (s.trigger == T::HelpAssigned && d == D::None) {
                return EdgeResult{S::BeingHelped, {}, {record(MetricKind::ServedAfterWait)}};
            }
            if (s.trigger == T::PatienceExpired) {
                if (d == D::Rebrowse) {
                    return EdgeResult{S::Browsing, {}, {record(MetricKind::LeftQueue), act(ActionKind::ScheduleBrowse)}};
                }
                if (d == D::Leave) return leave(ExitOutcome::RenegedHelp, {record(MetricKind::LeftQueue)});
            }
            break;
        case S::BeingHelped:
            if (s.trigger == T::ServiceDone) {
                if (d == D::GoToTill) return EdgeResult{S::QueueingAtTill, {}, {act(ActionKind::RequestPayment)}};
                if (d == D::Leave) return leave(ExitOutcome::NoPurchase, {});
            }
            break;
        case S::QueueingAtTill:
            if (s.trigger == T::Queued && d == D::None) return EdgeResult{S::QueueingAtTill, {}, {}};
            if (s.trigger == T::TillAssigned && d == D::None) {
                return EdgeResult{S::Paying, {},
                                  {record(c.waiting ? MetricKind::ServedAfterWait : MetricKind::ServedImmediately)}};
            }
            if (s.trigger == T::PatienceExpired) {
                if (d == D::Rebrowse) {
                    return EdgeResult{S::Browsing, {}, {record(MetricKind::LeftQueue), act(ActionKind::ScheduleBrowse)}};
                }
                if (d == D::Leave) return leave(ExitOutcome::RenegedTill, {record(MetricKind::LeftQueue)});
            }
            break;
        case S::Paying:
            if (s.trigger == T::PaymentDone && d == D::None) {
                return leave(ExitOutcome::Purchased, {record(MetricKind::PurchaseCompleted)});
            }
            break;
        case S::SeekingRefund:
            if (s.trigger == T::RefundAssigned && d == D::None) {
                return EdgeResult{S::RefundProcessing, {}, {record(MetricKind::ServedImmediately)}};
            }
            if (s.trigger == T::Queued && d == D::None) return EdgeResult{S::WaitingForRefund, {}, {}};
            break;
        case S::WaitingForRefund:
            if (s.trigger == T::RefundAssigned && d == D::None) {
                return EdgeResult{S::RefundProcessing, {}, {record(MetricKind::ServedAfterWait)}};
            }
            if (s.trigger == T::PatienceExpired && d == D::Leave) {
                return leave(ExitOutcome::RenegedRefund, {record(MetricKind::LeftQueue)});
            }
            break;
        case S::RefundProcessing:
            if (s.trigger == T::RefundResolved) {
                if (d == D::Approved) return leave(ExitOutcome::RefundDone, {record(MetricKind::RefundGranted)});
                if (d == D::Denied) return leave(ExitOutcome::RefundDone, {record(MetricKind::RefundDenied)});
            }
            break;
        case S::Left:
            break;
    }
    return std::nullopt;
}

}  // namespace

std::vector<Action> customer_transition(Customer& c, Stimulus s) {
    auto r = edge(c, s);
    if (!r) {
        throw IllegalTransition("customer " + std::to_string(c.id) + ": no edge from " +
                                to_string(c.state) + " on " + to_string(s.trigger) + "/" +
                                to_string(s.decision));
    }
    c.state = r->to;
    if (r->outcome) c.outcome = r->outcome;
    if (s.trigger == Trigger::Queued) c.waiting = true;
    if (s.trigger == Trigger::HelpAssigned || s.trigger == Trigger::TillAssigned ||
        s.trigger == Trigger::RefundAssigned || s.trigger == Trigger::PatienceExpired) {
        c.waiting = false;
    }
    return std::move(r->actions);
}

std::vector<Decision> legal_decisions(CustomerState state, Trigger trigger) {
    static constexpr Decision kAll[] = {Decision::None,     Decision::SeekHelp, Decision::GoToTill,
                                        Decision::Leave,    Decision::Rebrowse, Decision::Approved,
                                        Decision::Denied};
    std::vector<Decision> out;
    Customer probe;
    probe.state = state;
    for (Decision d : kAll) {
        if (edge(probe, Stimulus{trigger, d})) out.push_back(d);
    }
    return out;
}

BrowseOutcome post_browse_branch(const Customer& c, RngStream& branching) {
    if (c.state != CustomerState::Browsing) {
        throw IllegalTransition("post_browse_branch outside Browsing for customer " + std::to_string(c.id));
    }
    const auto& p = c.need_profile;
    const double u = branching.uniform01();
    if (u < p.p_help) return BrowseOutcome::SeekHelp;
    if (u < p.p_help + p.p_direct_till) return BrowseOutcome::GoToTill;
    return BrowseOutcome::Leave;
}

// ---------------------------------------------------------------------------
// Staff

void staff_begin(Staff& s, Task task, SimTime t) {
    if (s.busy) {
        throw DoubleAssign("staff " + std::to_string(s.id) + " already busy with " +
                           to_string(s.current_task->kind) + " when assigned " + to_string(task.kind));
    }
    s.busy = true;
    s.busy_since = t;
    s.current_task = task;
}

Task staff_end(Staff& s, SimTime t) {
    if (!s.busy) throw EndWhileIdle("staff " + std::to_string(s.id) + " ended a task while idle");
    s.busy = false;
    s.busy_minutes += t - s.busy_since;
    s.idle_since = t;
    Task done = *s.current_task;
    s.current_task.reset();
    return done;
}

std::int64_t PracticeLevers::promotion_points() const {
    return std::llround(competence_threshold * static_cast<double>(knowledge_scale));
}

void PracticeLevers::validate() const {
    auto prob = [](double p, const char* name) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
        }
    };
    prob(empowerment, "empowerment");
    prob(empower_to_learn, "empower_to_learn");
    prob(competence_threshold, "competence_threshold");
    prob(cashier_refund_approval, "cashier_refund_approval");
    prob(expert_refund_approval, "expert_refund_approval");
    if (knowledge_scale < 1) throw std::invalid_argument("knowledge_scale must be >= 1");
    if (points_per_episode < 0) throw std::invalid_argument("points_per_episode must be >= 0");
}

RefundHandler refund_routing(const PracticeLevers& levers, RngStream& rng) {
    return rng.bernoulli(levers.empowerment) ? RefundHandler::CashierAutonomous
                                             : RefundHandler::ReferToExpert;
}

bool refund_decision(RefundHandler handler, const PracticeLevers& levers, RngStream& rng) {
    const double p = handler == RefundHandler::CashierAutonomous ? levers.cashier_refund_approval
                                                                 : levers.expert_refund_approval;
    return rng.bernoulli(p);
}

bool learning_episode(const Staff& normal, const Staff& expert, const PracticeLevers& levers,
                      RngStream& rng) {
    if (normal.role != StaffRole::NormalSeller) {
        throw ModelBug("learning episode for staff " + std::to_string(normal.id) + " who is " +
                       to_string(normal.role));
    }
    if (expert.role != StaffRole::ExpertSeller) {
        throw ModelBug("learning episode hosted by non-expert " + std::to_string(expert.id));
    }
    return rng.bernoulli(levers.empower_to_learn);
}

bool promotion_check(Staff& s, const PracticeLevers& levers) {
    if (s.role != StaffRole::NormalSeller) return false;
    if (s.knowledge_points < levers.promotion_points()) return false;
    s.role = StaffRole::ExpertSeller;
    return true;
}

}  // namespace retailsim
