#include "retailsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace retailsim {

MalformedCsv::MalformedCsv(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

std::string format_fixed(double v, int decimals) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, end);
    // "-0.00" reads badly in a table
    if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

namespace {

std::string format_general(double v, int digits) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, digits);
    return std::string(buf, end);
}

// "p = .0123" or "p < .0001"
std::string p_clause(const char* name, double p) {
    return std::string(name) + (p < 0.0001 ? " < .0001" : " = " + format_p(p));
}

}  // namespace

std::string format_p(double p) {
    if (p < 0.0001) return "<.0001";
    std::string s = format_fixed(p, 4);
    if (s.rfind("0.", 0) == 0) s.erase(0, 1);
    return s;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) return out;
        start = comma + 1;
    }
}

}  // namespace

void write_results_csv(std::ostream& os, const std::vector<ReplicationResult>& results) {
    const auto& cols = outcome_columns();
    os << "level,rep,seed";
    for (const auto& c : cols) os << ',' << c;
    os << '\n';
    for (const auto& r : results) {
        os << format_double(r.level) << ',' << r.rep << ',' << r.seed;
        for (const auto& c : cols) {
            os << ',';
            if (auto v = outcome_value(r.outcome, c)) os << format_double(*v);
        }
        os << '\n';
    }
}

std::string results_csv(const std::vector<ReplicationResult>& results) {
    std::ostringstream os;
    write_results_csv(os, results);
    return os.str();
}

std::optional<std::size_t> ResultTable::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

ResultTable read_results_csv(std::istream& is) {
    ResultTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (lineno == 1) {
            t.header = split(line);
            for (const auto& h : t.header) {
                if (h.empty()) throw MalformedCsv(lineno, "empty column name");
            }
            if (!t.column("level")) throw MalformedCsv(lineno, "no 'level' column");
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split(line);
        if (fields.size() != t.header.size()) {
            throw MalformedCsv(lineno, "expected " + std::to_string(t.header.size()) + " fields, got " +
                                           std::to_string(fields.size()));
        }
        std::vector<std::optional<double>> row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string& f = fields[i];
            if (f.empty()) {
                row.emplace_back();
                continue;
            }
            double v = 0.0;
            auto [end, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc() || end != f.data() + f.size() || !std::isfinite(v)) {
                throw MalformedCsv(lineno, "column '" + t.header[i] + "': not a number: '" + f + "'");
            }
            row.emplace_back(v);
        }
        if (!row[*t.column("level")]) throw MalformedCsv(lineno, "missing level");
        t.rows.push_back(std::move(row));
    }
    if (t.header.empty()) throw MalformedCsv(1, "empty file");
    return t;
}

void write_descriptives_csv(std::ostream& os, const std::vector<LevelSummary>& summary,
                            const std::vector<std::string>& columns) {
    os << "level,n";
    for (const auto& c : columns) os << ',' << c << "_mean," << c << "_sd";
    os << ",sd_defined\n";
    for (const auto& s : summary) {
        std::size_t n = 0;
        bool sd_defined = true;
        for (const auto& d : s.columns) {
            n = std::max(n, d.n);
            sd_defined = sd_defined && !d.sd_undefined;
        }
        os << format_double(s.level) << ',' << n;
        for (const auto& d : s.columns) {
            os << ',';
            if (d.mean) os << format_fixed(*d.mean, 2);
            os << ',';
            if (d.sd) os << format_fixed(*d.sd, 2);
        }
        os << ',' << (sd_defined ? "true" : "false") << '\n';
    }
}

AnalysisReport analyse(const ResultTable& table, const std::vector<std::string>& dependent_vars,
                       double family_alpha, int family_size) {
    AnalysisReport r;
    r.family_alpha = family_alpha;
    r.family_size = family_size;
    r.corrected_alpha = stats::corrected_alpha(family_alpha, family_size);
    r.observations = table.rows.size();

    const std::size_t level_col = *table.column("level");
    std::vector<double> levels;
    for (const auto& row : table.rows) {
        const double l = *row[level_col];
        if (std::find(levels.begin(), levels.end(), l) == levels.end()) levels.push_back(l);
    }
    for (double l : levels) r.levels.push_back(format_double(l));
    if (levels.size() < 2) {
        throw stats::TooFewGroups("need at least 2 levels, found " + std::to_string(levels.size()));
    }

    for (const auto& var : dependent_vars) {
        const auto col = table.column(var);
        if (!col) throw std::invalid_argument("no column '" + var + "' in results");
        VariableAnalysis va;
        va.variable = var;
        stats::GroupSamples groups;
        std::size_t missing = 0;
        for (std::size_t li = 0; li < levels.size(); ++li) {
            stats::Group g{r.levels[li], {}};
            for (const auto& row : table.rows) {
                if (*row[level_col] != levels[li]) continue;
                if (row[*col]) {
                    g.values.push_back(*row[*col]);
                } else {
                    ++missing;
                }
            }
            groups.push_back(std::move(g));
        }
        if (missing > 0) {
            va.skipped = std::to_string(missing) + " missing values (role class empty in some runs)";
            r.variables.push_back(std::move(va));
            continue;
        }
        try {
            va.anova = stats::anova_oneway(groups);
        } catch (const stats::DegenerateVariance& e) {
            va.skipped = e.what();
        }
        if (va.anova && va.anova->p < family_alpha) {
            try {
                va.tukey = stats::tukey_hsd(groups, r.corrected_alpha);
            } catch (const std::exception& e) {
                va.skipped = std::string("post-hoc skipped: ") + e.what();
            }
        }
        r.variables.push_back(std::move(va));
    }
    return r;
}

std::string format_report(const AnalysisReport& r) {
    std::ostringstream os;
    os << "One-way between-groups ANOVA\n";
    os << "levels: ";
    for (std::size_t i = 0; i < r.levels.size(); ++i) os << (i ? ", " : "") << r.levels[i];
    os << "\nobservations: " << r.observations << '\n';
    os << "family alpha: " << format_p(r.family_alpha) << ", dependent variables: " << r.family_size
       << ", corrected post-hoc alpha: " << format_p(r.corrected_alpha) << '\n';

    for (const auto& v : r.variables) {
        os << '\n' << v.variable << '\n';
        if (!v.anova) {
            os << "  not analysed: " << v.skipped << '\n';
            continue;
        }
        const auto& a = *v.anova;
        os << "  F(" << a.df_between << ", " << a.df_within << ") = " << format_fixed(a.F, 2) << ", "
           << p_clause("p", a.p) << ", eta^2 = " << format_fixed(a.eta_squared, 2)
           << " (" << to_string(stats::effect_size_label(a.eta_squared)) << ")\n";
        os << "  means:";
        for (double m : a.group_means) os << ' ' << format_fixed(m, 2);
        os << '\n';
        if (!v.tukey) {
            if (!v.skipped.empty()) {
                os << "  " << v.skipped << '\n';
            } else {
                os << "  no post-hoc test (ANOVA not significant at " << format_p(r.family_alpha) << ")\n";
            }
            continue;
        }
        const auto& t = *v.tukey;
        os << "  Tukey HSD: q critical = " << format_fixed(t.q_critical, 3) << " at alpha "
           << format_p(t.corrected_alpha) << ", MSE = " << format_general(t.mse, 6) << '\n';
        for (const auto& p : t.pairs) {
            os << "    " << p.label_a << " vs " << p.label_b << ": diff = " << format_general(p.mean_difference, 6)
               << ", q = " << format_fixed(p.q, 3) << ", " << p_clause("p adj", p.p_adjusted) << (p.significant ? " *" : "") << '\n';
        }
    }
    return os.str();
}

}  // namespace retailsim
