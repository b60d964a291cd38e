#include <doctest.h>

#include <random>

#include "retailsim/experiments.hpp"
#include "retailsim/simulation.hpp"
#include "support.hpp"

using namespace retailsim;

TEST_SUITE("simulation") {

TEST_CASE("random scenarios keep every invariant") {
    std::mt19937_64 g(4242);
    for (int i = 0; i < 12; ++i) {
        const ScenarioConfig cfg = testing::random_config(g);
        CAPTURE(i);
        CAPTURE(canonical_json(cfg));
        const auto bad = testing::watch_replication(cfg, derive_seed(cfg.master_seed, 0.0, i), nullptr, 13);
        CHECK(bad.empty());
        if (!bad.empty()) MESSAGE(bad.front());
    }
}

TEST_CASE("default scenario keeps every invariant") {
    ScenarioConfig cfg = default_config();
    cfg.levers.empower_to_learn = 1.0;
    cfg.levers.empowerment = 0.5;
    cfg.levers.competence_threshold = 0.05;
    cfg.calendar.weeks = 2.0;
    Outcome o;
    const auto bad = testing::watch_replication(cfg, 99, &o);
    CHECK(bad.empty());
    CHECK(o.promotions > 0);
    CHECK(o.learning_episodes > 0);
    CHECK(o.refunds_referred > 0);
}

TEST_CASE("replications are bit-identical for the same seed") {
    std::mt19937_64 g(7);
    for (int i = 0; i < 3; ++i) {
        const ScenarioConfig cfg = testing::random_config(g);
        CHECK(run_replication(cfg, 2, 0.5) == run_replication(cfg, 2, 0.5));
    }
}

TEST_CASE("different replications draw differently") {
    ScenarioConfig cfg = default_config();
    cfg.calendar.weeks = 0.5;
    const auto a = run_replication(cfg, 0);
    const auto b = run_replication(cfg, 1);
    CHECK(a.seed != b.seed);
    CHECK(a.outcome != b.outcome);
}

TEST_CASE("finalize before the horizon is a model bug") {
    Simulation sim(default_config(), 1);
    sim.run_until(10.0);
    CHECK_THROWS_AS(sim.finalize(), ModelBug);
}

TEST_CASE("learning keeps the normal sellers close together") {
    ScenarioConfig cfg = default_config();
    cfg.levers.empower_to_learn = 1.0;
    Simulation sim(cfg, 5);
    sim.run();
    std::int64_t lo = 1 << 30, hi = -1;
    for (const Staff& s : sim.staff()) {
        if (s.initial_role != StaffRole::NormalSeller) continue;
        lo = std::min(lo, s.knowledge_points);
        hi = std::max(hi, s.knowledge_points);
    }
    CHECK(hi - lo <= 2);
    CHECK(lo > 50);
}

TEST_CASE("an empty roster only queues and reneges") {
    ScenarioConfig cfg = default_config();
    cfg.staffing = {0, 0, 0, 0};
    cfg.calendar.weeks = 0.2;
    Outcome o;
    CHECK(testing::watch_replication(cfg, 3, &o).empty());
    CHECK(o.transactions == 0);
    CHECK_FALSE(o.normal_utilization.has_value());
    CHECK_FALSE(o.expert_utilization.has_value());
    CHECK(o.reneged_help + o.reneged_till + o.reneged_refund > 0);
}

}  // TEST_SUITE
