#include "retailsim/simulation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace retailsim {

Simulation::Simulation(const ScenarioConfig& cfg, std::uint64_t seed, SimulationOptions opts)
    : cfg_(cfg),
      horizon_(cfg.calendar.horizon_minutes()),
      opts_(opts),
      rng_arrivals_(seed, "arrivals"),
      rng_intent_(seed, "intent"),
      rng_patience_(seed, "patience"),
      rng_browsing_(seed, "browsing"),
      rng_branching_(seed, "branching"),
      rng_service_(seed, "service"),
      rng_refund_routing_(seed, "refund-routing"),
      rng_refund_decisions_(seed, "refund-decisions"),
      rng_learning_(seed, "learning"),
      rng_values_(seed, "values"),
      queues_(cfg.queue_discipline),
      ledger_(cfg.weights) {
    cfg_.validate();
    kernel_.set_handler([this](const Event& e) {
        dispatch(e);
        if (observer_) observer_(e);
    });

    auto add = [this](StaffRole role, int n) {
        for (int i = 0; i < n; ++i) {
            Staff s;
            s.id = static_cast<AgentId>(staff_.size());
            s.role = role;
            s.initial_role = role;
            staff_.push_back(s);
        }
    };
    add(StaffRole::Cashier, cfg_.staffing.cashiers);
    add(StaffRole::NormalSeller, cfg_.staffing.normal_sellers);
    add(StaffRole::ExpertSeller, cfg_.staffing.experts);
    add(StaffRole::SectionManager, cfg_.staffing.section_managers);

    // a zero threshold promotes before the first customer arrives
    for (Staff& s : staff_) {
        if (promotion_check(s, cfg_.levers)) ++promotions_;
    }

    kernel_.schedule(horizon_, EventKind::HorizonReached);
    if (opts_.generate_arrivals) {
        kernel_.schedule(rng_arrivals_.sample(Distribution::exponential(60.0 / cfg_.arrival_rate)),
                         EventKind::Arrival);
    }
}

Outcome Simulation::run() {
    kernel_.run_until(horizon_);
    return finalize();
}

void Simulation::dispatch(const Event& e) {
    switch (e.kind) {
        case EventKind::Arrival: on_arrival(); break;
        case EventKind::BrowseDone: on_browse_done(e.target); break;
        case EventKind::PatienceExpired: renege(e.target); break;
        case EventKind::ServiceDone: on_service_done(e.target); break;
        case EventKind::HorizonReached: horizon_reached_ = true; break;
    }
}

AgentId Simulation::new_customer() {
    Customer c;
    c.id = static_cast<AgentId>(customers_.size());
    c.entered_at = kernel_.now();
    c.need_profile = cfg_.customers;
    customers_.push_back(c);
    context_.emplace_back();
    ++in_system_;
    return c.id;
}

void Simulation::on_arrival() {
    const AgentId id = new_customer();
    Customer& c = customers_[id];
    c.refund_visit = rng_intent_.bernoulli(cfg_.customers.p_refund_visit);
    c.required_expertise = rng_intent_.bernoulli(cfg_.customers.p_expert_needed) ? Expertise::Expert
                                                                                 : Expertise::Normal;
    c.patience.help = rng_patience_.sample(cfg_.timing.patience_help);
    c.patience.till = rng_patience_.sample(cfg_.timing.patience_till);
    c.patience.refund = rng_patience_.sample(cfg_.timing.patience_refund);
    c.item_value = rng_values_.sample(cfg_.timing.item_value);

    kernel_.schedule_in(rng_arrivals_.sample(Distribution::exponential(60.0 / cfg_.arrival_rate)),
                        EventKind::Arrival);
    apply(id, Stimulus{Trigger::Entered});
}

AgentId Simulation::admit(Customer proto) {
    const AgentId id = new_customer();
    proto.id = id;
    proto.state = CustomerState::Contemplating;
    proto.entered_at = kernel_.now();
    proto.outcome.reset();
    proto.waiting = false;
    customers_[id] = proto;
    apply(id, Stimulus{Trigger::Entered});
    return id;
}

AgentId Simulation::admit_with_need(ServiceNeed need, Patience patience) {
    const AgentId id = new_customer();
    Customer& c = customers_[id];
    c.patience = patience;
    c.required_expertise = need.required;
    switch (need.kind) {
        case NeedKind::Help: c.state = CustomerState::SeekingHelp; break;
        case NeedKind::Payment: c.state = CustomerState::QueueingAtTill; break;
        case NeedKind::Refund:
            c.state = CustomerState::SeekingRefund;
            c.refund_visit = true;
            break;
    }
    request_service(id, need);
    return id;
}

void Simulation::on_browse_done(AgentId id) {
    Decision d = Decision::Leave;
    switch (post_browse_branch(customers_[id], rng_branching_)) {
        case BrowseOutcome::SeekHelp: d = Decision::SeekHelp; break;
        case BrowseOutcome::GoToTill: d = Decision::GoToTill; break;
        case BrowseOutcome::Leave: d = Decision::Leave; break;
    }
    apply(id, Stimulus{Trigger::BrowseDone, d});
}

void Simulation::apply(AgentId id, Stimulus s) {
    const auto actions = customer_transition(customers_[id], s);
    for (const Action& a : actions) {
        switch (a.kind) {
            case ActionKind::ScheduleBrowse:
                kernel_.schedule_in(rng_browsing_.sample(cfg_.timing.browse), EventKind::BrowseDone, id);
                break;
            case ActionKind::RequestHelp:
                request_service(id, ServiceNeed::help(customers_[id].required_expertise));
                break;
            case ActionKind::RequestPayment: request_service(id, ServiceNeed::payment()); break;
            case ActionKind::RequestRefund: request_service(id, ServiceNeed::refund()); break;
            case ActionKind::Record: ledger_.record(a.metric); break;
            case ActionKind::Exit:
                ++exits_[static_cast<std::size_t>(*customers_[id].outcome)];
                --in_system_;
                break;
        }
    }
}

ServiceRequestResult Simulation::request_service(AgentId id, ServiceNeed need) {
    if (queues_.contains(id)) throw ModelBug("customer " + std::to_string(id) + " requested service while queued");
    ServiceRequestResult r;
    auto take = [&](std::optional<AgentId> s, auto start) {
        if (!s) return false;
        (this->*start)(id, *s);
        r.assigned_to = s;
        return true;
    };

    switch (need.kind) {
        case NeedKind::Payment:
            if (take(pick_idle(staff_, StaffRole::Cashier, SellerSelection::LongestIdleFirst),
                     &Simulation::start_payment)) {
                return r;
            }
            break;
        case NeedKind::Refund:
            if (take(pick_idle(staff_, StaffRole::Cashier, SellerSelection::LongestIdleFirst),
                     &Simulation::start_refund)) {
                return r;
            }
            break;
        case NeedKind::Help: {
            const auto normal = pick_idle(staff_, StaffRole::NormalSeller, cfg_.seller_selection);
            const auto expert = pick_idle(staff_, StaffRole::ExpertSeller, SellerSelection::LongestIdleFirst);
            if (need.required == Expertise::Normal) {
                if (take(normal, &Simulation::start_help)) return r;
                if (take(expert, &Simulation::start_help)) return r;
                break;
            }
            if (normal && expert) {
                // The normal seller cannot answer and calls the expert over.
                // The customer is steered to whoever has the most to learn.
                const AgentId referrer =
                    *pick_idle(staff_, StaffRole::NormalSeller, SellerSelection::LeastKnowledgeFirst);
                start_help(id, *expert);
                r.assigned_to = expert;
                r.referred_by = referrer;
                if (learning_episode(staff_[referrer], staff_[*expert], cfg_.levers, rng_learning_)) {
                    staff_begin(staff_[referrer], Task{id, TaskKind::Shadow}, kernel_.now());
                    context_[id].learner = referrer;
                }
                return r;
            }
            // Without an idle expert the customer waits for one, even if a
            // normal seller was free to take the first contact.
            if (!normal && take(expert, &Simulation::start_help)) return r;
            break;
        }
    }

    r.queued = enqueue(id, need);
    return r;
}

QueueEntry Simulation::enqueue(AgentId id, ServiceNeed need) {
    const Customer& c = customers_[id];
    double patience = c.patience.help;
    if (need.kind == NeedKind::Payment) patience = c.patience.till;
    if (need.kind == NeedKind::Refund) patience = c.patience.refund;
    const EventHandle h = kernel_.schedule_in(patience, EventKind::PatienceExpired, id);
    QueueEntry entry = queues_.enqueue(id, need, kernel_.now(), h);
    apply(id, Stimulus{Trigger::Queued});
    return entry;
}

void Simulation::start_help(AgentId id, AgentId seller) {
    staff_begin(staff_[seller], Task{id, TaskKind::Help}, kernel_.now());
    context_[id].server = seller;
    apply(id, Stimulus{Trigger::HelpAssigned});
    const Distribution& d = customers_[id].required_expertise == Expertise::Expert
                                ? cfg_.timing.expert_help_service
                                : cfg_.timing.help_service;
    kernel_.schedule_in(rng_service_.sample(d), EventKind::ServiceDone, id);
}

void Simulation::start_payment(AgentId id, AgentId cashier) {
    staff_begin(staff_[cashier], Task{id, TaskKind::Payment}, kernel_.now());
    context_[id].server = cashier;
    apply(id, Stimulus{Trigger::TillAssigned});
    kernel_.schedule_in(rng_service_.sample(cfg_.timing.payment), EventKind::ServiceDone, id);
}

void Simulation::start_refund(AgentId id, AgentId cashier) {
    staff_begin(staff_[cashier], Task{id, TaskKind::Refund}, kernel_.now());
    ServiceContext& ctx = context_[id];
    ctx.cashier = cashier;
    apply(id, Stimulus{Trigger::RefundAssigned});
    ctx.refund_handler = refund_routing(cfg_.levers, rng_refund_routing_);
    if (*ctx.refund_handler == RefundHandler::CashierAutonomous) {
        ctx.server = cashier;
        kernel_.schedule_in(rng_service_.sample(cfg_.timing.refund_cashier), EventKind::ServiceDone, id);
        return;
    }
    // The cashier stays with the customer until an expert has decided.
    ledger_.record(MetricKind::RefundReferredWait);
    if (auto expert = pick_idle(staff_, StaffRole::ExpertSeller, SellerSelection::LongestIdleFirst)) {
        start_referral(id, *expert);
    } else {
        referrals_.push_back(id);
    }
}

void Simulation::start_referral(AgentId id, AgentId expert) {
    staff_begin(staff_[expert], Task{id, TaskKind::RefundReferral}, kernel_.now());
    context_[id].server = expert;
    kernel_.schedule_in(rng_service_.sample(cfg_.timing.refund_expert), EventKind::ServiceDone, id);
}

void Simulation::on_service_done(AgentId id) {
    Customer& c = customers_[id];
    ServiceContext& ctx = context_[id];
    const SimTime t = kernel_.now();
    std::vector<AgentId> freed;

    switch (c.state) {
        case CustomerState::BeingHelped: {
            staff_end(staff_[ctx.server], t);
            freed.push_back(ctx.server);
            if (ctx.learner != kNoAgent) {
                Staff& learner = staff_[ctx.learner];
                staff_end(learner, t);
                learner.knowledge_points += cfg_.levers.points_per_episode;
                ++learning_episodes_;
                if (promotion_check(learner, cfg_.levers)) {
                    ++promotions_;
                    learner.role_since = t;
                    learner.busy_before_role = learner.busy_minutes_at(t);
                }
                freed.push_back(ctx.learner);
                ctx.learner = kNoAgent;
            }
            const bool buys = rng_branching_.bernoulli(c.need_profile.p_buy_after_help);
            apply(id, Stimulus{Trigger::ServiceDone, buys ? Decision::GoToTill : Decision::Leave});
            break;
        }
        case CustomerState::Paying:
            staff_end(staff_[ctx.server], t);
            freed.push_back(ctx.server);
            revenue_ += c.item_value;
            apply(id, Stimulus{Trigger::PaymentDone});
            break;
        case CustomerState::RefundProcessing: {
            const RefundHandler h = ctx.refund_handler.value();
            if (h == RefundHandler::ReferToExpert) {
                staff_end(staff_[ctx.server], t);
                freed.push_back(ctx.server);
            }
            staff_end(staff_[ctx.cashier], t);
            freed.push_back(ctx.cashier);
            const bool approved = refund_decision(h, cfg_.levers, rng_refund_decisions_);
            apply(id, Stimulus{Trigger::RefundResolved, approved ? Decision::Approved : Decision::Denied});
            break;
        }
        default:
            throw ModelBug("ServiceDone for customer " + std::to_string(id) + " in state " +
                           to_string(c.state));
    }
    for (AgentId s : freed) on_staff_freed(s);
}

void Simulation::serve_entry(AgentId staff, const QueueEntry& e) {
    kernel_.cancel(e.patience_handle);
    switch (e.need.kind) {
        case NeedKind::Help: start_help(e.customer, staff); break;
        case NeedKind::Payment: start_payment(e.customer, staff); break;
        case NeedKind::Refund: start_refund(e.customer, staff); break;
    }
}

std::optional<AgentId> Simulation::on_staff_freed(AgentId sid) {
    Staff& s = staff_[sid];
    if (s.busy) return std::nullopt;
    if (s.role == StaffRole::ExpertSeller && !referrals_.empty()) {
        const AgentId c = referrals_.front();
        referrals_.pop_front();
        start_referral(c, sid);
        return c;
    }
    auto e = queues_.next_for(s.role);
    if (!e) return std::nullopt;
    serve_entry(sid, *e);
    return e->customer;
}

void Simulation::renege(AgentId id) {
    auto e = queues_.remove(id);
    if (!e) throw ModelBug("patience expired for customer " + std::to_string(id) + " who is not queued");
    Decision d = Decision::Leave;
    switch (e->need.kind) {
        case NeedKind::Help:
            ++reneged_help_;
            if (rng_branching_.bernoulli(customers_[id].need_profile.p_rebrowse_while_waiting)) d = Decision::Rebrowse;
            break;
        case NeedKind::Payment:
            ++reneged_till_;
            if (rng_branching_.bernoulli(customers_[id].need_profile.p_rebrowse_while_waiting)) d = Decision::Rebrowse;
            break;
        case NeedKind::Refund: ++reneged_refund_; break;
    }
    apply(id, Stimulus{Trigger::PatienceExpired, d});
}

Outcome Simulation::finalize() const {
    if (!horizon_reached_) throw ModelBug("finalize called before the horizon was reached");
    const SimTime t = horizon_;
    Outcome o;
    o.transactions = static_cast<std::int64_t>(ledger_.transactions());
    o.overall_satisfaction = ledger_.overall_satisfaction();
    o.refund_satisfaction = ledger_.refund_satisfaction();

    // Promoted sellers count towards the expert class only from promotion on.
    std::vector<double> normal_busy, expert_busy, expert_scheduled;
    double points = 0.0;
    for (const Staff& s : staff_) {
        if (s.role == StaffRole::NormalSeller) {
            normal_busy.push_back(s.busy_minutes_at(t));
            points += static_cast<double>(s.knowledge_points);
        } else if (s.role == StaffRole::ExpertSeller && t > s.role_since) {
            expert_busy.push_back(s.busy_minutes_at(t) - s.busy_before_role);
            expert_scheduled.push_back(t - s.role_since);
        }
    }
    if (!normal_busy.empty()) {
        o.mean_normal_expertise = points / static_cast<double>(normal_busy.size());
        o.normal_utilization = utilization(normal_busy, t);
    }
    if (!expert_busy.empty()) o.expert_utilization = utilization(expert_busy, expert_scheduled);

    o.reneged_help = reneged_help_;
    o.reneged_till = reneged_till_;
    o.reneged_refund = reneged_refund_;
    o.entered = entered();
    o.in_system = in_system_;
    o.refunds_granted = static_cast<std::int64_t>(ledger_.count(MetricKind::RefundGranted));
    o.refunds_denied = static_cast<std::int64_t>(ledger_.count(MetricKind::RefundDenied));
    o.refunds_referred = static_cast<std::int64_t>(ledger_.count(MetricKind::RefundReferredWait));
    o.learning_episodes = learning_episodes_;
    o.promotions = promotions_;
    o.revenue = revenue_;
    return o;
}

std::vector<std::string> Simulation::check_invariants() const {
    std::vector<std::string> bad;
    auto fail = [&](std::string s) { bad.push_back(std::move(s)); };

    // staff: busy <=> task, task points back to a customer in a matching state
    std::vector<int> shadow_per_customer(customers_.size(), 0);
    for (const Staff& s : staff_) {
        if (s.busy != s.current_task.has_value()) fail("staff " + std::to_string(s.id) + " busy flag disagrees with task");
        if (s.role == StaffRole::SectionManager && s.busy) fail("section manager assigned work");
        if (!s.current_task) continue;
        const Task& task = *s.current_task;
        if (task.customer < 0 || static_cast<std::size_t>(task.customer) >= customers_.size()) {
            fail("staff " + std::to_string(s.id) + " serves unknown customer");
            continue;
        }
        const Customer& c = customers_[task.customer];
        const ServiceContext& ctx = context_[task.customer];
        switch (task.kind) {
            case TaskKind::Help:
                if (c.state != CustomerState::BeingHelped || ctx.server != s.id) fail("help task mismatch for staff " + std::to_string(s.id));
                if (s.role != StaffRole::NormalSeller && s.role != StaffRole::ExpertSeller) fail("help served by non-seller");
                if (c.required_expertise == Expertise::Expert && s.role != StaffRole::ExpertSeller) fail("expert need served by non-expert");
                break;
            case TaskKind::Payment:
                if (c.state != CustomerState::Paying || s.role != StaffRole::Cashier) fail("payment task mismatch for staff " + std::to_string(s.id));
                break;
            case TaskKind::Refund:
                if (c.state != CustomerState::RefundProcessing || s.role != StaffRole::Cashier || ctx.cashier != s.id) fail("refund task mismatch for staff " + std::to_string(s.id));
                break;
            case TaskKind::RefundReferral:
                if (c.state != CustomerState::RefundProcessing || s.role != StaffRole::ExpertSeller || ctx.server != s.id) fail("referral task mismatch for staff " + std::to_string(s.id));
                break;
            case TaskKind::Shadow:
                if (c.state != CustomerState::BeingHelped || ctx.learner != s.id || s.role != StaffRole::NormalSeller) fail("shadow task mismatch for staff " + std::to_string(s.id));
                ++shadow_per_customer[task.customer];
                break;
        }
        if (s.busy_minutes_at(kernel_.now()) > kernel_.now() + 1e-9) fail("staff " + std::to_string(s.id) + " busy longer than elapsed time");
    }
    for (std::size_t i = 0; i < shadow_per_customer.size(); ++i) {
        if (shadow_per_customer[i] > 1) fail("more than one learner on customer " + std::to_string(i));
    }

    // queued customers: waiting state and a live patience event
    std::int64_t waiting = 0;
    for (const Customer& c : customers_) {
        const bool queued = queues_.contains(c.id);
        const bool waiting_state = c.state == CustomerState::WaitingForHelp || c.state == CustomerState::WaitingForRefund ||
                                   (c.state == CustomerState::QueueingAtTill && c.waiting);
        if (queued != waiting_state) fail("customer " + std::to_string(c.id) + " queue membership disagrees with state " + to_string(c.state));
        if (queued) ++waiting;
        if (c.state == CustomerState::Left && !c.outcome) fail("customer left without outcome");
    }
    if (waiting != static_cast<std::int64_t>(queues_.total())) fail("queue size disagrees with waiting customers");

    // conservation
    std::int64_t left = 0;
    for (auto n : exits_) left += n;
    if (entered() != left + in_system_) fail("customer conservation violated");
    if (static_cast<double>(ledger_.transactions()) > static_cast<double>(entered())) fail("more transactions than customers");
    return bad;
}

}  // namespace retailsim
