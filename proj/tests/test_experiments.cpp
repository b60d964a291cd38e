#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "retailsim/experiments.hpp"
#include "retailsim/report.hpp"

using namespace retailsim;

namespace {

// Flattens a JSON document into dotted-path -> value text.
void flatten(const nlohmann::json& j, const std::string& prefix, std::map<std::string, std::string>& out) {
    if (j.is_object()) {
        for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    } else {
        out[prefix] = j.dump();
    }
}

std::set<std::string> differing_keys(const ScenarioConfig& a, const ScenarioConfig& b) {
    std::map<std::string, std::string> fa, fb;
    flatten(to_json(a), "", fa);
    flatten(to_json(b), "", fb);
    std::set<std::string> keys;
    for (const auto& [k, v] : fa) {
        if (fb[k] != v) keys.insert(k);
    }
    return keys;
}

ScenarioConfig short_base() {
    ScenarioConfig c = default_config();
    c.calendar.weeks = 0.25;
    return c;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("preset shapes") {
    const auto e1 = preset("empowerment");
    CHECK(e1.lever == Lever::Empowerment);
    CHECK(e1.levels == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(e1.replications == 20);
    CHECK(e1.dependent_vars.size() == 3);
    const auto e2 = preset("learning");
    CHECK(e2.lever == Lever::EmpowerToLearn);
    CHECK(e2.levels.size() == 5);
    const auto e3 = preset("development");
    CHECK(e3.lever == Lever::CompetenceThreshold);
    CHECK(e3.levels == std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8, 1.0});
    CHECK(e3.base.levers.empower_to_learn == 1.0);
    CHECK_THROWS_AS(preset("staffing"), std::invalid_argument);
    CHECK(preset_names().size() == 3);
}

TEST_CASE("levels differ from the base only in the lever field") {
    for (const auto& name : preset_names()) {
        const auto spec = preset(name);
        const std::string field = "levers." + std::string(to_string(spec.lever));
        for (double v : spec.levels) {
            const auto keys = differing_keys(spec.base, with_lever(spec.base, spec.lever, v));
            CHECK(keys.size() <= 1);
            if (!keys.empty()) CHECK(*keys.begin() == field);
        }
    }
}

TEST_CASE("sweep validation") {
    auto spec = preset("empowerment", short_base());
    spec.replications = 1;
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.replications = 2;
    spec.levels = {};
    CHECK_THROWS_AS(run_sweep(spec), std::invalid_argument);
    spec.levels = {0.5, 1.5};
    CHECK_THROWS_AS(run_sweep(spec), ConfigError);
}

TEST_CASE("sweep output order and seeds") {
    auto spec = preset("empowerment", short_base());
    spec.replications = 3;
    const auto rows = run_sweep(spec, 2);
    REQUIRE(rows.size() == 15);
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].level == spec.levels[i / 3]);
        CHECK(rows[i].rep == i % 3);
        CHECK(rows[i].seed == derive_seed(spec.base.master_seed, rows[i].level, rows[i].rep));
        seeds.insert(rows[i].seed);
    }
    CHECK(seeds.size() == 15);
}

TEST_CASE("parallel sweep equals serial sweep") {
    auto spec = preset("development", short_base());
    spec.replications = 3;
    const auto serial = run_sweep(spec, 1);
    CHECK(run_sweep(spec, 4) == serial);
    CHECK(run_sweep(spec, 64) == serial);
}

TEST_CASE("a replication is reproducible on its own") {
    auto spec = preset("learning", short_base());
    spec.replications = 2;
    const auto rows = run_sweep(spec, 3);
    const auto again = run_replication(with_lever(spec.base, spec.lever, rows[5].level), rows[5].rep, rows[5].level);
    CHECK(again == rows[5]);
}

TEST_CASE("df bookkeeping follows the sweep shape") {
    auto spec = preset("empowerment", short_base());
    spec.replications = 4;
    const auto csv = results_csv(run_sweep(spec));
    std::istringstream in(csv);
    const auto report = analyse(read_results_csv(in), {"refund_satisfaction"}, 0.05, 3);
    REQUIRE(report.variables[0].anova.has_value());
    CHECK(report.variables[0].anova->df_between == 4);
    CHECK(report.variables[0].anova->df_within == 15);
}

TEST_CASE("one level with two replications is refused by the ANOVA") {
    SweepSpec spec = preset("empowerment", short_base());
    spec.levels = {0.5};
    spec.replications = 2;
    const auto rows = run_sweep(spec);
    CHECK(rows.size() == 2);
    std::istringstream in(results_csv(rows));
    CHECK_THROWS_AS(analyse(read_results_csv(in), {"transactions"}, 0.05, 3), stats::TooFewGroups);
}

TEST_CASE("summaries with one observation flag the SD") {
    std::vector<ReplicationResult> rows(2);
    rows[0].level = 0.0;
    rows[0].outcome.transactions = 10;
    rows[1].level = 1.0;
    rows[1].outcome.transactions = 20;
    const auto s = summarize(rows, {"transactions", "expert_utilization"});
    REQUIRE(s.size() == 2);
    CHECK(s[0].columns[0].mean == 10.0);
    CHECK(s[0].columns[0].sd == 0.0);
    CHECK(s[0].columns[0].sd_undefined);
    CHECK_FALSE(s[0].columns[1].mean.has_value());  // absent column stays absent
    std::ostringstream os;
    write_descriptives_csv(os, s, {"transactions", "expert_utilization"});
    CHECK(os.str() ==
          "level,n,transactions_mean,transactions_sd,expert_utilization_mean,expert_utilization_sd,sd_defined\n"
          "0,1,10.00,0.00,,,false\n"
          "1,1,20.00,0.00,,,false\n");
}

TEST_CASE("constant outcomes have zero SD") {
    std::vector<ReplicationResult> rows(3);
    for (auto& r : rows) r.outcome.overall_satisfaction = 4.5;
    const auto s = summarize(rows, {"overall_satisfaction"});
    REQUIRE(s.size() == 1);
    CHECK(s[0].columns[0].n == 3);
    CHECK(s[0].columns[0].sd == 0.0);
    CHECK_FALSE(s[0].columns[0].sd_undefined);
}

TEST_CASE("refund satisfaction is negative without empowerment") {
    const auto spec = preset("empowerment");
    const auto r = run_replication(with_lever(spec.base, spec.lever, 0.0), 0, 0.0);
    CHECK(r.outcome.refund_satisfaction < 0.0);
    const auto full = run_replication(with_lever(spec.base, spec.lever, 1.0), 0, 1.0);
    CHECK(full.outcome.refund_satisfaction > 0.0);
}

}  // TEST_SUITE
