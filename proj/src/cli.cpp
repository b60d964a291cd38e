#include "retailsim/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "retailsim/agents.hpp"
#include "retailsim/experiments.hpp"
#include "retailsim/report.hpp"

namespace retailsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
    std::uint64_t v = 0;
    const char* b = text.data();
    const char* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError(field, "not an unsigned 64-bit integer: '" + text + "'");
    return v;
}

json manifest(std::string command, const ScenarioConfig& cfg, const std::string& seed_source,
              const std::string& started, const std::vector<std::string>& outputs) {
    return json{{"tool", "retailsim"},
                {"version", std::string(kToolVersion)},
                {"command", std::move(command)},
                {"config_digest", config_digest(cfg)},
                {"master_seed", cfg.master_seed},
                {"seed_source", seed_source},
                {"started_at", started},
                {"finished_at", utc_now()},
                {"outputs", outputs},
                {"config", to_json(cfg)}};
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot write " + p.string());
    f << content;
    if (!f) throw std::ios_base::failure("write failed for " + p.string());
}

// Shared error mapping for the commands.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const ModelBug& e) {
        err << "model bug: " << e.what() << '\n';
        return kExitModelBug;
    } catch (const MalformedCsv& e) {
        err << "malformed results file: " << e.what() << '\n';
        return kExitConfig;
    } catch (const stats::TooFewGroups& e) {
        err << "TooFewGroups: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace

ScenarioConfig resolve_config(const std::optional<std::string>& path, const std::vector<std::string>& overrides,
                              std::optional<std::uint64_t> seed, std::string* seed_source) {
    json doc;
    if (path) {
        std::ifstream in(*path);
        if (!in) throw ConfigError("<file>", "cannot open " + *path);
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
        }
        if (!doc.is_object()) throw ConfigError("<file>", "top level must be an object");
    } else {
        doc = json::object();
    }
    for (const auto& o : overrides) apply_override(doc, o);
    ScenarioConfig cfg = config_from_json(doc);

    std::string source = "config";
    if (seed) {
        cfg.master_seed = *seed;
        source = "flag";
    } else if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
        cfg.master_seed = parse_seed(env, kSeedEnvVar);
        source = "env";
    }
    if (seed_source) *seed_source = source;
    return cfg;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_now();
        std::string source;
        const ScenarioConfig cfg = resolve_config(a.config_path, a.overrides, a.seed, &source);
        const ReplicationResult r = run_replication(cfg, 0, 0.0);
        const std::string csv = results_csv({r});
        if (!a.out_path) {
            out << csv;
            return int{kExitOk};
        }
        const fs::path csv_path(*a.out_path);
        if (csv_path.has_parent_path()) fs::create_directories(csv_path.parent_path());
        const fs::path manifest_path = csv_path.string() + ".manifest.json";
        write_file(csv_path, csv);
        write_file(manifest_path,
                   manifest("simulate", cfg, source, started, {csv_path.string(), manifest_path.string()}).dump(2) +
                       "\n");
        out << "wrote " << csv_path.string() << '\n';
        return int{kExitOk};
    });
}

int cmd_experiment(const ExperimentArgs& a, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string started = utc_now();
        std::string source;
        const ScenarioConfig base = resolve_config(a.config_path, a.overrides, a.seed, &source);
        SweepSpec spec = preset(a.name, base);
        if (a.reps) spec.replications = *a.reps;
        if (spec.replications < 2) throw ConfigError("reps", "need at least 2 replications per level");

        const auto results = run_sweep(spec, a.jobs);
        const std::string csv = results_csv(results);

        std::ostringstream desc;
        write_descriptives_csv(desc, summarize(results, spec.dependent_vars), spec.dependent_vars);

        // Analyse the serialized table so that `stats` on results.csv
        // reproduces this report exactly.
        std::istringstream csv_in(csv);
        const auto report =
            format_report(analyse(read_results_csv(csv_in), spec.dependent_vars, 0.05, spec.n_dependent_vars));

        const fs::path dir(a.out_dir);
        fs::create_directories(dir);
        const fs::path results_path = dir / "results.csv";
        const fs::path desc_path = dir / "descriptives.csv";
        const fs::path anova_path = dir / "anova.txt";
        const fs::path manifest_path = dir / "manifest.json";
        write_file(results_path, csv);
        write_file(desc_path, desc.str());
        write_file(anova_path, report);
        json m = manifest("experiment " + a.name, spec.base, source, started,
                          {results_path.string(), desc_path.string(), anova_path.string(), manifest_path.string()});
        m["lever"] = std::string(to_string(spec.lever));
        m["levels"] = spec.levels;
        m["replications"] = spec.replications;
        m["jobs"] = a.jobs;
        write_file(manifest_path, m.dump(2) + "\n");
        out << "wrote " << results.size() << " rows to " << results_path.string() << '\n';
        return int{kExitOk};
    });
}

int cmd_stats(const StatsArgs& a, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (a.dependent_vars.empty()) throw std::invalid_argument("no dependent variables given");
        std::ifstream in(a.results_path, std::ios::binary);
        if (!in) throw std::ios_base::failure("cannot open " + a.results_path);
        const ResultTable table = read_results_csv(in);
        const int family = a.family_size.value_or(static_cast<int>(a.dependent_vars.size()));
        const std::string report = format_report(analyse(table, a.dependent_vars, a.family_alpha, family));
        if (a.out_path) {
            write_file(*a.out_path, report);
        } else {
            out << report;
        }
        return int{kExitOk};
    });
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Agent-based retail department simulator", "retailsim"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    std::optional<std::string> seed_text;
    auto seed_value = [&]() -> std::optional<std::uint64_t> {
        if (!seed_text) return std::nullopt;
        return parse_seed(*seed_text, "--seed");
    };

    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Run one replication and print its outcome row");
    s->add_option("--config", sim.config_path, "JSON scenario file")->check(CLI::ExistingFile);
    s->add_option("--set", sim.overrides, "Dotted override, e.g. levers.empowerment=0.5");
    s->add_option("--seed", seed_text, "Master seed (overrides config and " + std::string(kSeedEnvVar) + ")");
    s->add_option("--out", sim.out_path, "CSV output file (stdout if omitted)");

    ExperimentArgs ex;
    ex.jobs = std::max(1u, std::thread::hardware_concurrency());
    auto* e = app.add_subcommand("experiment", "Run a preset sweep and analyse it");
    e->add_option("name", ex.name, "empowerment, learning or development")
        ->required()
        ->check(CLI::IsMember(preset_names()));
    e->add_option("--config", ex.config_path, "JSON base scenario")->check(CLI::ExistingFile);
    e->add_option("--set", ex.overrides, "Dotted override applied to the base scenario");
    e->add_option("--seed", seed_text, "Master seed");
    e->add_option("--reps", ex.reps, "Replications per level (default 20)")->check(CLI::Range(2u, 100000u));
    e->add_option("--jobs", ex.jobs, "Worker threads")->check(CLI::PositiveNumber);
    e->add_option("--out", ex.out_dir, "Output directory")->required();

    StatsArgs st;
    auto* t = app.add_subcommand("stats", "ANOVA and Tukey HSD for a results file");
    t->add_option("results", st.results_path, "results.csv")->required();
    t->add_option("--dv", st.dependent_vars, "Dependent variable column (repeatable)")->required();
    t->add_option("--alpha", st.family_alpha, "Family-wise alpha")->check(CLI::Range(0.0, 1.0));
    t->add_option("--family-size", st.family_size, "Divisor for the post-hoc alpha (default: number of --dv)")
        ->check(CLI::PositiveNumber);
    t->add_option("--out", st.out_path, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& pe) {
        // help and version requests exit 0, usage errors are input errors
        return app.exit(pe, out, err) == 0 ? int{kExitOk} : int{kExitConfig};
    }

    try {
        if (*s) {
            sim.seed = seed_value();
            return cmd_simulate(sim, out, err);
        }
        if (*e) {
            ex.seed = seed_value();
            return cmd_experiment(ex, out, err);
        }
        return cmd_stats(st, out, err);
    } catch (const ConfigError& ce) {
        err << "config error: " << ce.what() << '\n';
        return kExitConfig;
    }
}

}  // namespace retailsim
