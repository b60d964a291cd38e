// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "oracles.hpp"
#include "retailsim/experiments.hpp"
#include "retailsim/report.hpp"
#include "retailsim/stats.hpp"
#include "support.hpp"

using namespace retailsim;
using testing::level_positions;
using testing::rel;
using testing::strictly_increasing;

namespace {

int failures = 0;

void verdict(int id, const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  C" << id << " " << name << ": " << detail << std::endl;
    if (!ok) ++failures;
}

std::string fmt(double v, int decimals = 3) { return format_fixed(v, decimals); }

std::string join(const std::vector<double>& v, int decimals = 3) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i], decimals);
    return s + "]";
}

unsigned jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

struct Sweep {
    SweepSpec spec;
    std::vector<ReplicationResult> rows;
    double seconds = 0.0;

    std::vector<double> values(double level, const std::string& column) const {
        std::vector<double> out;
        for (const auto& r : rows) {
            if (r.level != level) continue;
            if (auto v = outcome_value(r.outcome, column)) out.push_back(*v);
        }
        return out;
    }
    std::vector<double> means(const std::string& column, std::size_t n_levels = 0) const {
        std::vector<double> m;
        const std::size_t n = n_levels ? n_levels : spec.levels.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = values(spec.levels[i], column);
            m.push_back(v.empty() ? std::numeric_limits<double>::quiet_NaN() : stats::mean(v));
        }
        return m;
    }
    AnalysisReport analysis(const std::vector<std::string>& dvs) const {
        std::istringstream in(results_csv(rows));
        return analyse(read_results_csv(in), dvs, 0.05, spec.n_dependent_vars);
    }
};

Sweep run(const std::string& name, std::uint64_t master_seed) {
    ScenarioConfig base = default_config();
    base.master_seed = master_seed;
    Sweep s{preset(name, base), {}, 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    s.rows = run_sweep(s.spec, jobs());
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

double rho(const std::vector<double>& y) { return stats::spearman_rho(level_positions(y.size()), y); }

const stats::AnovaResult& anova_of(const AnalysisReport& r, const std::string& dv) {
    for (const auto& v : r.variables) {
        if (v.variable == dv) {
            if (!v.anova) throw std::runtime_error(dv + " not analysed: " + v.skipped);
            return *v.anova;
        }
    }
    throw std::runtime_error("no analysis for " + dv);
}

void criterion1(const Sweep& e1) {
    const auto refund = e1.means("refund_satisfaction");
    const auto overall = e1.means("overall_satisfaction");
    const auto trans = e1.means("transactions");
    const auto a = anova_of(e1.analysis({"refund_satisfaction"}), "refund_satisfaction");
    const double r_ref = rho(refund), r_all = rho(overall), r_tr = rho(trans);
    const bool ok = strictly_increasing(refund) && r_ref == 1.0 && r_all >= 0.9 && r_tr <= -0.9 &&
                    refund.front() < 0.0 && refund.back() > 0.0 && a.p < 0.01 && a.eta_squared > 0.14 &&
                    e1.seconds < 300.0;
    verdict(1, "empowerment sweep", ok,
            "refund means " + join(refund, 1) + " rho " + fmt(r_ref) + ", overall rho " + fmt(r_all) +
                ", transactions rho " + fmt(r_tr) + ", F(" + std::to_string(a.df_between) + ", " +
                std::to_string(a.df_within) + ") = " + fmt(a.F, 2) + " p " + format_p(a.p) + " eta^2 " +
                fmt(a.eta_squared) + ", " + fmt(e1.seconds, 1) + " s");
}

void criterion2(const Sweep& e2, std::uint64_t master_seed) {
    const auto expertise = e2.means("mean_normal_expertise");
    const auto nutil = e2.means("normal_utilization");
    const auto overall = e2.means("overall_satisfaction");
    bool nondecreasing = true;
    for (std::size_t i = 1; i < nutil.size(); ++i) nondecreasing = nondecreasing && nutil[i] >= nutil[i - 1];
    const double r_exp = rho(expertise), r_all = rho(overall);
    bool ok = expertise.front() == 0.0 && strictly_increasing(expertise) && r_exp == 1.0 && nondecreasing &&
              r_all <= -0.9;

    int null_util = 0, null_trans = 0;
    std::string ps;
    for (int i = 0; i < 5; ++i) {
        const Sweep s = i == 0 ? e2 : run("learning", master_seed + static_cast<std::uint64_t>(i));
        const auto r = s.analysis({"expert_utilization", "transactions"});
        const double pu = anova_of(r, "expert_utilization").p, pt = anova_of(r, "transactions").p;
        null_util += pu >= 0.05;
        null_trans += pt >= 0.05;
        ps += (i ? " " : "") + format_p(pu) + "/" + format_p(pt);
    }
    ok = ok && null_util >= 4 && null_trans >= 4;
    verdict(2, "learning sweep", ok,
            "expertise " + join(expertise, 2) + " rho " + fmt(r_exp) + ", normal utilization " + join(nutil) +
                ", overall rho " + fmt(r_all) + ", p(expert util/transactions) over 5 seeds " + ps + ", nulls " +
                std::to_string(null_util) + "/5 and " + std::to_string(null_trans) + "/5");
}

void criterion3(const Sweep& e3) {
    const auto eutil = e3.means("expert_utilization");
    const auto trans = e3.means("transactions", 5);
    const auto overall = e3.means("overall_satisfaction", 5);
    const double r_eu = rho(eutil), r_tr = rho(trans), r_all = rho(overall);
    const auto normals = e3.spec.base.staffing.normal_sellers;
    bool promotions = true;
    for (const auto& r : e3.rows) {
        const std::int64_t want = r.level <= 0.6 + 1e-12 ? normals : 0;
        promotions = promotions && r.outcome.promotions == want;
    }
    const bool ok = r_eu >= 0.9 && r_tr <= -0.9 && r_all <= -0.9 && promotions;
    verdict(3, "development sweep", ok,
            "expert utilization " + join(eutil) + " rho " + fmt(r_eu) + ", transactions rho " + fmt(r_tr) +
                ", overall rho " + fmt(r_all) + " (thresholds 0..0.8), promotions " +
                (promotions ? "all at <= 0.6 and none above" : "wrong"));
}

void criterion4() {
    std::mt19937_64 g(20240601);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const int k = 2 + static_cast<int>(g() % 5);
        const int n = 5 + static_cast<int>(g() % 26);
        const auto groups = testing::random_groups(g, k, n);
        const auto got = stats::anova_oneway(groups);
        const auto want = testing::reference_anova(groups);
        worst = std::max({worst, rel(got.F, want.F), rel(got.p, want.p), rel(got.eta_squared, want.eta2)});
    }
    const auto hand = stats::anova_oneway({{"a", {1, 2, 3}}, {"b", {2, 3, 4}}});
    const bool hand_ok = std::abs(hand.F - 1.5) < 1e-12 && hand.df_between == 1 && hand.df_within == 4 &&
                         std::abs(hand.eta_squared - 1.5 / 5.5) < 1e-12;
    verdict(4, "ANOVA oracle", worst < 1e-6 && hand_ok,
            "worst relative error over 200 datasets " + format_double(worst) + ", hand example F " +
                format_double(hand.F) + " df(" + std::to_string(hand.df_between) + ", " +
                std::to_string(hand.df_within) + ") eta^2 " + format_double(hand.eta_squared));
}

void criterion5() {
    std::mt19937_64 g(777);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto groups = testing::random_groups(g, 2, 5 + static_cast<int>(g() % 26));
        const double q = stats::tukey_hsd(groups, 0.05).pairs.at(0).q;
        worst = std::max(worst, rel(q * q, 2.0 * stats::anova_oneway(groups).F));
    }
    struct Point {
        double alpha;
        int k;
        double df, q;
    };
    const double inf = std::numeric_limits<double>::infinity();
    const Point table[] = {
        {0.05, 2, 5, 3.635},  {0.05, 2, 10, 3.151}, {0.05, 3, 10, 3.877}, {0.05, 4, 20, 3.958},
        {0.05, 5, 20, 4.232}, {0.05, 5, 60, 3.977}, {0.05, 6, 30, 4.302}, {0.05, 10, 10, 5.598},
        {0.05, 3, inf, 3.314}, {0.01, 3, 10, 5.270},
    };
    double table_worst = 0.0;
    for (const auto& p : table) {
        table_worst = std::max(table_worst, std::abs(stats::studentized_range_upper_quantile(p.alpha, p.k, p.df) - p.q));
    }
    verdict(5, "Tukey identity and table", worst < 1e-9 && table_worst < 1e-3,
            "worst |q^2 - 2F| relative " + format_double(worst) + ", worst table deviation " +
                format_double(table_worst));
}

void criterion6(const Sweep& e1) {
    const double a = stats::corrected_alpha(0.05, 3);
    const std::string text = format_report(e1.analysis(e1.spec.dependent_vars));
    const bool shown = text.find("corrected post-hoc alpha: .0167") != std::string::npos;
    verdict(6, "corrected alpha", std::abs(a - 0.05 / 3.0) < 1e-15 && shown,
            "corrected_alpha(0.05, 3) = " + format_double(a) + ", report shows " + (shown ? ".0167" : "something else"));
}

void criterion7() {
    std::mt19937_64 g(31337);
    std::size_t runs = 0, violations = 0, nondeterministic = 0;
    std::string first;
    for (int i = 0; i < 50; ++i) {
        const ScenarioConfig cfg = testing::random_config(g);
        for (int rep = 0; rep < 3; ++rep) {
            const auto bad = testing::watch_replication(cfg, derive_seed(cfg.master_seed, 0.0, rep));
            ++runs;
            if (!bad.empty()) {
                ++violations;
                if (first.empty()) first = bad.front();
            }
        }
        if (i % 10 == 0) {
            const auto a = run_replication(cfg, 1, 0.0), b = run_replication(cfg, 1, 0.0);
            if (!(a == b) || results_csv({a}) != results_csv({b})) ++nondeterministic;
        }
    }
    ScenarioConfig base = testing::random_config(g);
    base.calendar.weeks = 0.3;
    SweepSpec spec = preset("development", base);
    spec.replications = 3;
    const bool parallel_ok = results_csv(run_sweep(spec, 1)) == results_csv(run_sweep(spec, 4));
    verdict(7, "invariants", violations == 0 && nondeterministic == 0 && parallel_ok,
            std::to_string(runs) + " runs, " + std::to_string(violations) + " with violations" +
                (first.empty() ? "" : " (" + first + ")") + ", " + std::to_string(nondeterministic) +
                " nondeterministic, parallel " + (parallel_ok ? "==" : "!=") + " serial");
}

void criterion8(const Sweep& e1) {
    bool ok = true;
    std::string detail;
    for (double level : e1.spec.levels) {
        double granted = 0, decided = 0;
        for (const auto& r : e1.rows) {
            if (r.level != level) continue;
            granted += static_cast<double>(r.outcome.refunds_granted);
            decided += static_cast<double>(r.outcome.refunds_granted + r.outcome.refunds_denied);
        }
        const double p = 0.7 + 0.1 * level;
        const double se = std::sqrt(p * (1.0 - p) / decided);
        const double rate = granted / decided;
        const double z = (rate - p) / se;
        ok = ok && decided >= 10000 && std::abs(z) <= 3.0;
        detail += (detail.empty() ? "" : ", ") + fmt(level, 2) + ": " + fmt(rate, 4) + " vs " + fmt(p, 3) +
                  " (n " + std::to_string(static_cast<long long>(decided)) + ", z " + fmt(z, 2) + ")";
    }
    verdict(8, "refund approval rate", ok, detail);
}

void criterion9(const Sweep& e1, const Sweep& e3) {
    const auto a1 = anova_of(e1.analysis({"refund_satisfaction"}), "refund_satisfaction");
    const auto a3 = anova_of(e3.analysis({"expert_utilization"}), "expert_utilization");
    const bool ok = a1.df_between == 4 && a1.df_within == 95 && a3.df_between == 5 && a3.df_within == 114;
    verdict(9, "degrees of freedom", ok,
            "empowerment (" + std::to_string(a1.df_between) + ", " + std::to_string(a1.df_within) +
                "), development (" + std::to_string(a3.df_between) + ", " + std::to_string(a3.df_within) + ")");
}

template <class F>
void guarded(int id, const std::string& name, F&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        verdict(id, name, false, std::string("exception: ") + e.what());
    }
}

}  // namespace

int main() {
    const std::uint64_t seed = default_config().master_seed;
    std::cout << "master seed " << seed << ", " << jobs() << " worker thread(s)" << std::endl;

    const Sweep e1 = run("empowerment", seed);
    guarded(1, "empowerment sweep", [&] { criterion1(e1); });
    guarded(2, "learning sweep", [&] { criterion2(run("learning", seed), seed); });
    const Sweep e3 = run("development", seed);
    guarded(3, "development sweep", [&] { criterion3(e3); });
    guarded(4, "ANOVA oracle", criterion4);
    guarded(5, "Tukey identity and table", criterion5);
    guarded(6, "corrected alpha", [&] { criterion6(e1); });
    guarded(7, "invariants", criterion7);
    guarded(8, "refund approval rate", [&] { criterion8(e1); });
    guarded(9, "degrees of freedom", [&] { criterion9(e1, e3); });

    std::cout << (failures ? "FAILED " : "ALL PASSED ") << (9 - failures) << "/9" << std::endl;
    return failures ? 1 : 0;
}
