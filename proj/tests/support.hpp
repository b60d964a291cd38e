#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "retailsim/config.hpp"
#include "retailsim/simulation.hpp"

namespace retailsim::testing {

/// A valid scenario with every behavioural knob drawn at random. Runs are
/// kept short (a few simulated days to two weeks). Weights are multiples of
/// 0.25 so running sums stay exact in binary floating point.
inline ScenarioConfig random_config(std::mt19937_64& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); };
    auto quarter = [&](int lo, int hi) { return 0.25 * pick(lo, hi); };

    ScenarioConfig c = default_config(u(g) < 0.5 ? Department::AudioTelevision : Department::Womenswear);
    c.staffing.cashiers = pick(0, 4);
    c.staffing.normal_sellers = pick(0, 8);
    c.staffing.experts = pick(0, 3);
    c.staffing.section_managers = pick(0, 2);
    c.arrival_rate = 10.0 + 110.0 * u(g);
    c.calendar.weeks = 0.1 + 0.9 * u(g);

    c.levers.empowerment = u(g);
    c.levers.empower_to_learn = u(g);
    c.levers.competence_threshold = u(g) < 0.2 ? 0.0 : u(g);
    c.levers.knowledge_scale = pick(1, 60);
    c.levers.points_per_episode = pick(0, 3);
    c.levers.cashier_refund_approval = u(g);
    c.levers.expert_refund_approval = u(g);

    for (auto& w : c.weights.w) w = quarter(-16, 16);
    c.weights.w[2] = quarter(-16, -1);  // keep one negative kind

    const double help = u(g);
    const double till = (1.0 - help) * u(g);
    c.customers.p_help = help;
    c.customers.p_direct_till = till;
    c.customers.p_leave_after_browse = 1.0 - help - till;
    c.customers.p_rebrowse_while_waiting = u(g);
    c.customers.p_refund_visit = 0.3 * u(g);
    c.customers.p_expert_needed = u(g);
    c.customers.p_buy_after_help = u(g);

    c.timing.patience_help = Distribution::exponential(1.0 + 20.0 * u(g));
    c.timing.patience_till = Distribution::uniform(0.5, 0.5 + 20.0 * u(g));
    c.timing.patience_refund = Distribution::triangular(0.5, 4.0, 4.0 + 20.0 * u(g));
    c.timing.help_service = Distribution::triangular(0.5, 3.0 + 5.0 * u(g), 25.0);
    c.timing.expert_help_service = Distribution::exponential(1.0 + 30.0 * u(g));

    c.queue_discipline = u(g) < 0.5 ? QueueDiscipline::LongestWaitFirst : QueueDiscipline::NeedPriority;
    c.seller_selection = u(g) < 0.5 ? SellerSelection::LongestIdleFirst : SellerSelection::LeastKnowledgeFirst;
    c.master_seed = g();
    c.validate();
    return c;
}

/// Runs one replication while watching it and returns every property
/// violation found: structural invariants (sampled every `stride` events and
/// at the horizon), clock monotonicity, knowledge monotonicity, per-staff
/// utilization bounds, customer conservation and the weighted-sum identity.
/// Model bugs such as double assignment surface as a violation too.
inline std::vector<std::string> watch_replication(const ScenarioConfig& cfg, std::uint64_t seed,
                                                  Outcome* outcome = nullptr, std::uint64_t stride = 97) {
    std::vector<std::string> bad;
    try {
        Simulation sim(cfg, seed);
        std::vector<std::int64_t> points;
        for (const Staff& s : sim.staff()) points.push_back(s.knowledge_points);
        SimTime last = 0.0;
        std::uint64_t n = 0;
        sim.set_event_observer([&](const Event& e) {
            if (e.time < last) bad.push_back("clock went backwards");
            last = e.time;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (sim.staff()[i].knowledge_points < points[i]) bad.push_back("knowledge decreased");
                points[i] = sim.staff()[i].knowledge_points;
            }
            if (++n % stride == 0) {
                for (auto& v : sim.check_invariants()) bad.push_back(v);
            }
        });
        const Outcome o = sim.run();
        for (auto& v : sim.check_invariants()) bad.push_back(v);

        std::int64_t exited = 0;
        for (int k = 0; k < kExitOutcomeCount; ++k) exited += sim.exits(static_cast<ExitOutcome>(k));
        if (o.entered != exited + o.in_system) bad.push_back("customer conservation");
        if (o.overall_satisfaction != sim.ledger().recomputed_overall()) bad.push_back("overall weighted sum");
        if (o.refund_satisfaction != sim.ledger().recomputed_refund()) bad.push_back("refund weighted sum");
        if (o.transactions != sim.exits(ExitOutcome::Purchased)) bad.push_back("transactions vs purchases");
        for (const Staff& s : sim.staff()) {
            const double u = s.busy_minutes_at(sim.horizon()) / sim.horizon();
            if (!(u >= 0.0 && u <= 1.0)) bad.push_back("staff utilization outside [0,1]");
        }
        for (auto u : {o.normal_utilization, o.expert_utilization}) {
            if (u && !(*u >= 0.0 && *u <= 1.0)) bad.push_back("class utilization outside [0,1]");
        }
        const auto ks = sim.kernel().stats();
        if (ks.scheduled != ks.fired + ks.cancelled + ks.pending) bad.push_back("event list conservation");
        if (outcome) *outcome = o;
    } catch (const std::exception& e) {
        bad.push_back(std::string("exception: ") + e.what());
    }
    return bad;
}

inline std::vector<double> level_positions(std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i);
    return x;
}

inline bool strictly_increasing(std::span<const double> v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

}  // namespace retailsim::testing
