#include "retailsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "retailsim/simulation.hpp"
#include "retailsim/stats.hpp"

namespace retailsim {

std::string_view to_string(Lever l) {
    switch (l) {
        case Lever::Empowerment: return "empowerment";
        case Lever::EmpowerToLearn: return "empower_to_learn";
        case Lever::CompetenceThreshold: return "competence_threshold";
    }
    return "?";
}

ScenarioConfig with_lever(ScenarioConfig cfg, Lever lever, double value) {
    switch (lever) {
        case Lever::Empowerment: cfg.levers.empowerment = value; break;
        case Lever::EmpowerToLearn: cfg.levers.empower_to_learn = value; break;
        case Lever::CompetenceThreshold: cfg.levers.competence_threshold = value; break;
    }
    return cfg;
}

void SweepSpec::validate() const {
    if (levels.empty()) throw std::invalid_argument("sweep has no levels");
    if (replications < 2) throw std::invalid_argument("sweep needs at least 2 replications per level");
    for (double v : levels) with_lever(base, lever, v).validate();
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"empowerment", "learning", "development"};
    return names;
}

SweepSpec preset(std::string_view name, const ScenarioConfig& base) {
    SweepSpec s;
    s.name = std::string(name);
    s.base = base;
    s.replications = 20;
    s.n_dependent_vars = 3;
    if (name == "empowerment") {
        s.lever = Lever::Empowerment;
        s.levels = {0.0, 0.25, 0.5, 0.75, 1.0};
        s.dependent_vars = {"transactions", "overall_satisfaction", "refund_satisfaction"};
        s.base.levers.competence_threshold = 1.0;
    } else if (name == "learning") {
        s.lever = Lever::EmpowerToLearn;
        s.levels = {0.0, 0.25, 0.5, 0.75, 1.0};
        s.dependent_vars = {"mean_normal_expertise", "normal_utilization", "expert_utilization",
                            "transactions", "overall_satisfaction"};
        s.base.levers.competence_threshold = 1.0;
    } else if (name == "development") {
        s.lever = Lever::CompetenceThreshold;
        s.levels = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        s.dependent_vars = {"mean_normal_expertise", "normal_utilization", "expert_utilization",
                            "transactions", "overall_satisfaction"};
        s.base.levers.empower_to_learn = 1.0;
    } else {
        throw std::invalid_argument("unknown experiment '" + std::string(name) +
                                    "' (expected empowerment, learning or development)");
    }
    return s;
}

ReplicationResult run_replication(const ScenarioConfig& cfg, std::uint32_t rep_index, double level) {
    ReplicationResult r;
    r.level = level;
    r.rep = rep_index;
    r.seed = derive_seed(cfg.master_seed, level, rep_index);
    Simulation sim(cfg, r.seed);
    r.outcome = sim.run();
    return r;
}

std::vector<ReplicationResult> run_sweep(const SweepSpec& spec, unsigned jobs) {
    spec.validate();
    const std::size_t total = spec.levels.size() * spec.replications;
    std::vector<ReplicationResult> out(total);
    std::vector<ScenarioConfig> configs;
    for (double v : spec.levels) configs.push_back(with_lever(spec.base, spec.lever, v));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            const std::size_t li = i / spec.replications;
            const auto rep = static_cast<std::uint32_t>(i % spec.replications);
            try {
                out[i] = run_replication(configs[li], rep, spec.levels[li]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(total);
                return;
            }
        }
    };

    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(total)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::vector<LevelSummary> summarize(const std::vector<ReplicationResult>& results,
                                    const std::vector<std::string>& columns) {
    std::vector<double> levels;
    for (const auto& r : results) {
        if (std::find(levels.begin(), levels.end(), r.level) == levels.end()) levels.push_back(r.level);
    }
    std::vector<LevelSummary> out;
    for (double level : levels) {
        LevelSummary s;
        s.level = level;
        for (const auto& col : columns) {
            std::vector<double> xs;
            bool any_absent = false;
            for (const auto& r : results) {
                if (r.level != level) continue;
                if (auto v = outcome_value(r.outcome, col)) {
                    xs.push_back(*v);
                } else {
                    any_absent = true;
                }
            }
            Descriptive d;
            d.n = xs.size();
            if (!xs.empty() && !any_absent) {
                d.mean = stats::mean(xs);
                d.sd = stats::sample_sd(xs);
                d.sd_undefined = xs.size() == 1;
            }
            s.columns.push_back(d);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace retailsim
