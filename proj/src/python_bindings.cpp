// Python extension. Configs and results cross the boundary as JSON text; the
// package wrapper turns them into dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "retailsim/cli.hpp"
#include "retailsim/experiments.hpp"
#include "retailsim/report.hpp"
#include "retailsim/stats.hpp"

namespace py = pybind11;
using namespace retailsim;
using nlohmann::json;

namespace {

ScenarioConfig config_of(const std::string& config_json) {
    if (config_json.empty()) return default_config();
    json doc;
    try {
        doc = json::parse(config_json);
    } catch (const json::parse_error& e) {
        throw ConfigError("<config>", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(doc);
}

json row_json(const ReplicationResult& r) {
    json j{{"level", r.level}, {"rep", r.rep}, {"seed", r.seed}};
    for (const auto& c : outcome_columns()) {
        const auto v = outcome_value(r.outcome, c);
        j[c] = v ? json(*v) : json(nullptr);
    }
    return j;
}

stats::GroupSamples groups_of(const std::vector<std::vector<double>>& values) {
    stats::GroupSamples g;
    for (std::size_t i = 0; i < values.size(); ++i) g.push_back({std::to_string(i), values[i]});
    return g;
}

py::dict anova_dict(const stats::AnovaResult& a) {
    py::dict d;
    d["F"] = a.F;
    d["df_between"] = a.df_between;
    d["df_within"] = a.df_within;
    d["p"] = a.p;
    d["eta_squared"] = a.eta_squared;
    d["ss_between"] = a.ss_between;
    d["ss_within"] = a.ss_within;
    d["group_means"] = a.group_means;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Agent-based retail department simulator";
    m.attr("__version__") = std::string(kToolVersion);

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<ModelBug>(m, "ModelBug", PyExc_RuntimeError);
    py::register_exception<MalformedCsv>(m, "MalformedCsv", PyExc_ValueError);
    py::register_exception<stats::TooFewGroups>(m, "TooFewGroups", PyExc_ValueError);

    m.def(
        "default_config_json",
        [](const std::string& department) {
            Department d = Department::AudioTelevision;
            if (department == "WW") {
                d = Department::Womenswear;
            } else if (department != "ATV") {
                throw ConfigError("department", "expected ATV or WW");
            }
            return to_json(default_config(d)).dump();
        },
        py::arg("department") = "ATV");
    m.def(
        "normalize_config_json", [](const std::string& c) { return to_json(config_of(c)).dump(); }, py::arg("config"));
    m.def(
        "config_digest", [](const std::string& c) { return config_digest(config_of(c)); }, py::arg("config"));

    m.def(
        "simulate_json",
        [](const std::string& c, std::uint32_t rep, double level) {
            const ScenarioConfig cfg = config_of(c);
            py::gil_scoped_release release;
            return row_json(run_replication(cfg, rep, level)).dump();
        },
        py::arg("config"), py::arg("rep") = 0, py::arg("level") = 0.0);

    m.def(
        "experiment_json",
        [](const std::string& name, const std::string& c, std::optional<std::uint32_t> reps, unsigned jobs) {
            SweepSpec spec = preset(name, config_of(c));
            if (reps) spec.replications = *reps;
            std::vector<ReplicationResult> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(spec, jobs);
            }
            json out = json::array();
            for (const auto& r : rows) out.push_back(row_json(r));
            std::istringstream csv(results_csv(rows));
            const auto report =
                format_report(analyse(read_results_csv(csv), spec.dependent_vars, 0.05, spec.n_dependent_vars));
            return json{{"rows", out}, {"dependent_vars", spec.dependent_vars}, {"report", report}}.dump();
        },
        py::arg("name"), py::arg("config") = "", py::arg("reps") = py::none(), py::arg("jobs") = 1);

    m.def("preset_names", &preset_names);

    m.def(
        "anova", [](const std::vector<std::vector<double>>& g) { return anova_dict(stats::anova_oneway(groups_of(g))); },
        py::arg("groups"));
    m.def(
        "tukey",
        [](const std::vector<std::vector<double>>& g, double alpha) {
            const auto t = stats::tukey_hsd(groups_of(g), alpha);
            py::list pairs;
            for (const auto& p : t.pairs) {
                py::dict d;
                d["a"] = p.a;
                d["b"] = p.b;
                d["mean_difference"] = p.mean_difference;
                d["q"] = p.q;
                d["p_adjusted"] = p.p_adjusted;
                d["significant"] = p.significant;
                pairs.append(d);
            }
            py::dict d;
            d["pairs"] = pairs;
            d["q_critical"] = t.q_critical;
            d["mse"] = t.mse;
            d["alpha"] = t.corrected_alpha;
            return d;
        },
        py::arg("groups"), py::arg("alpha") = 0.05);
    m.def("corrected_alpha", &stats::corrected_alpha, py::arg("family_alpha"), py::arg("n_dependent_vars"));
    m.def("f_upper_tail", &stats::f_upper_tail, py::arg("f"), py::arg("df1"), py::arg("df2"));
    m.def("studentized_range_cdf", &stats::studentized_range_cdf, py::arg("q"), py::arg("k"), py::arg("df"));
    m.def("studentized_range_quantile", &stats::studentized_range_upper_quantile, py::arg("alpha"), py::arg("k"),
          py::arg("df"));
    m.def("format_p", &format_p, py::arg("p"));

    m.def(
        "analyse_csv",
        [](const std::string& csv_text, const std::vector<std::string>& dvs, double family_alpha,
           std::optional<int> family_size) {
            std::istringstream in(csv_text);
            return format_report(analyse(read_results_csv(in), dvs, family_alpha,
                                         family_size.value_or(static_cast<int>(dvs.size()))));
        },
        py::arg("csv_text"), py::arg("dependent_vars"), py::arg("family_alpha") = 0.05,
        py::arg("family_size") = py::none());
}
