#include "retailsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace retailsim {

using nlohmann::json;

std::string_view to_string(Department d) {
    return d == Department::AudioTelevision ? "ATV" : "WW";
}

ScenarioConfig default_config(Department d) {
    ScenarioConfig cfg;
    cfg.department = d;
    if (d == Department::Womenswear) {
        cfg.customers.p_help = 0.25;
        cfg.customers.p_direct_till = 0.55;
        cfg.customers.p_leave_after_browse = 0.20;
        cfg.timing.help_service = Distribution::triangular(1, 2, 5);
        cfg.timing.item_value = Distribution::triangular(10, 35, 150);
    }
    return cfg;
}

void ScenarioConfig::validate() const {
    auto count = [](int v, const char* field) {
        if (v < 0) throw ConfigError(field, "must be >= 0");
    };
    count(staffing.cashiers, "staffing.cashiers");
    count(staffing.normal_sellers, "staffing.normal_sellers");
    count(staffing.experts, "staffing.experts");
    count(staffing.section_managers, "staffing.section_managers");
    if (!(arrival_rate > 0.0) || !std::isfinite(arrival_rate)) {
        throw ConfigError("arrival_rate", "must be a finite value > 0");
    }
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field, "must be a finite value > 0");
    };
    positive(calendar.weeks, "calendar.weeks");
    positive(calendar.days_per_week, "calendar.days_per_week");
    positive(calendar.hours_per_day, "calendar.hours_per_day");
    try {
        levers.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("levers", e.what());
    }
    try {
        weights.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("weights", e.what());
    }
    try {
        customers.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("customers", e.what());
    }
    const std::pair<const Distribution*, const char*> dists[] = {
        {&timing.browse, "timing.browse"},
        {&timing.patience_help, "timing.patience_help"},
        {&timing.patience_till, "timing.patience_till"},
        {&timing.patience_refund, "timing.patience_refund"},
        {&timing.help_service, "timing.help_service"},
        {&timing.expert_help_service, "timing.expert_help_service"},
        {&timing.payment, "timing.payment"},
        {&timing.refund_cashier, "timing.refund_cashier"},
        {&timing.refund_expert, "timing.refund_expert"},
        {&timing.item_value, "timing.item_value"},
    };
    for (auto [d, field] : dists) {
        try {
            d->validate();
        } catch (const BadDistributionParams& e) {
            throw ConfigError(field, e.what());
        }
        if (d->kind == Distribution::Kind::Bernoulli) throw ConfigError(field, "bernoulli is not a duration");
        const double lo = d->kind == Distribution::Kind::Exponential ? 0.0 : d->a;
        if (lo < 0.0) throw ConfigError(field, "durations and values must be non-negative");
    }
    // patience must be strictly positive
    for (std::size_t i = 1; i <= 3; ++i) {
        const auto [d, field] = dists[i];
        if (d->kind != Distribution::Kind::Exponential && !(d->a > 0.0)) {
            throw ConfigError(field, "patience must be > 0");
        }
    }
}

json distribution_to_json(const Distribution& d) {
    switch (d.kind) {
        case Distribution::Kind::Exponential: return json{{"exponential", d.a}};
        case Distribution::Kind::Uniform: return json{{"uniform", {d.a, d.b}}};
        case Distribution::Kind::Triangular: return json{{"triangular", {d.a, d.b, d.c}}};
        case Distribution::Kind::Bernoulli: return json{{"bernoulli", d.a}};
    }
    return {};
}

Distribution distribution_from_json(const json& j, const std::string& field) {
    if (!j.is_object() || j.size() != 1) {
        throw ConfigError(field, "expected an object with exactly one distribution key");
    }
    const auto& [name, v] = *j.items().begin();
    auto num = [&](const json& x) {
        if (!x.is_number()) throw ConfigError(field, "distribution parameters must be numbers");
        return x.get<double>();
    };
    auto arr = [&](std::size_t n) {
        if (!v.is_array() || v.size() != n) {
            throw ConfigError(field, name + " expects " + std::to_string(n) + " parameters");
        }
    };
    Distribution d;
    if (name == "exponential") {
        d = Distribution::exponential(num(v));
    } else if (name == "bernoulli") {
        d = Distribution::bernoulli(num(v));
    } else if (name == "uniform") {
        arr(2);
        d = Distribution::uniform(num(v[0]), num(v[1]));
    } else if (name == "triangular") {
        arr(3);
        d = Distribution::triangular(num(v[0]), num(v[1]), num(v[2]));
    } else {
        throw ConfigError(field, "unknown distribution '" + name + "'");
    }
    try {
        d.validate();
    } catch (const BadDistributionParams& e) {
        throw ConfigError(field, e.what());
    }
    return d;
}

json to_json(const ScenarioConfig& c) {
    json w = json::object();
    for (auto k : kAllMetricKinds) w[std::string(metric_name(k))] = c.weights[k];
    return json{
        {"staffing",
         {{"cashiers", c.staffing.cashiers},
          {"normal_sellers", c.staffing.normal_sellers},
          {"experts", c.staffing.experts},
          {"section_managers", c.staffing.section_managers}}},
        {"arrival_rate", c.arrival_rate},
        {"calendar",
         {{"weeks", c.calendar.weeks},
          {"days_per_week", c.calendar.days_per_week},
          {"hours_per_day", c.calendar.hours_per_day}}},
        {"department", std::string(to_string(c.department))},
        {"levers",
         {{"empowerment", c.levers.empowerment},
          {"empower_to_learn", c.levers.empower_to_learn},
          {"competence_threshold", c.levers.competence_threshold},
          {"knowledge_scale", c.levers.knowledge_scale},
          {"points_per_episode", c.levers.points_per_episode},
          {"cashier_refund_approval", c.levers.cashier_refund_approval},
          {"expert_refund_approval", c.levers.expert_refund_approval}}},
        {"weights", w},
        {"customers",
         {{"p_help", c.customers.p_help},
          {"p_direct_till", c.customers.p_direct_till},
          {"p_leave_after_browse", c.customers.p_leave_after_browse},
          {"p_rebrowse_while_waiting", c.customers.p_rebrowse_while_waiting},
          {"p_refund_visit", c.customers.p_refund_visit},
          {"p_expert_needed", c.customers.p_expert_needed},
          {"p_buy_after_help", c.customers.p_buy_after_help}}},
        {"timing",
         {{"browse", distribution_to_json(c.timing.browse)},
          {"patience_help", distribution_to_json(c.timing.patience_help)},
          {"patience_till", distribution_to_json(c.timing.patience_till)},
          {"patience_refund", distribution_to_json(c.timing.patience_refund)},
          {"help_service", distribution_to_json(c.timing.help_service)},
          {"expert_help_service", distribution_to_json(c.timing.expert_help_service)},
          {"payment", distribution_to_json(c.timing.payment)},
          {"refund_cashier", distribution_to_json(c.timing.refund_cashier)},
          {"refund_expert", distribution_to_json(c.timing.refund_expert)},
          {"item_value", distribution_to_json(c.timing.item_value)}}},
        {"queue_discipline", std::string(to_string(c.queue_discipline))},
        {"seller_selection", std::string(to_string(c.seller_selection))},
        {"master_seed", c.master_seed},
    };
}

namespace {

// Walks one JSON object, dispatching known keys and rejecting the rest.
class ObjectReader {
  public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    template <class F>
    void on(const std::string& key, F&& f) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it != j_.end()) f(*it, field(key));
    }

    void number(const std::string& key, double& out) {
        on(key, [&](const json& v, const std::string& f) {
            if (!v.is_number()) throw ConfigError(f, "expected a number");
            out = v.get<double>();
            if (!std::isfinite(out)) throw ConfigError(f, "must be finite");
        });
    }

    template <class Int>
    void integer(const std::string& key, Int& out) {
        on(key, [&](const json& v, const std::string& f) {
            if (!v.is_number_integer()) throw ConfigError(f, "expected an integer");
            if constexpr (std::is_unsigned_v<Int>) {
                if (v.is_number_unsigned()) {
                    out = v.get<Int>();
                    return;
                }
                if (v.get<std::int64_t>() < 0) throw ConfigError(f, "must be non-negative");
            }
            out = v.get<Int>();
        });
    }

    void finish() const {
        for (const auto& [k, _] : j_.items()) {
            if (!seen_.contains(k)) throw ConfigError(field(k), "unknown key");
        }
    }

  private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

}  // namespace

ScenarioConfig config_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("<root>", "expected an object");

    Department dept = Department::AudioTelevision;
    if (auto it = j.find("department"); it != j.end()) {
        if (!it->is_string()) throw ConfigError("department", "expected \"ATV\" or \"WW\"");
        const auto s = it->get<std::string>();
        if (s == "ATV" || s == "A&TV") {
            dept = Department::AudioTelevision;
        } else if (s == "WW") {
            dept = Department::Womenswear;
        } else {
            throw ConfigError("department", "expected \"ATV\" or \"WW\", got \"" + s + "\"");
        }
    }
    ScenarioConfig c = default_config(dept);

    ObjectReader root(j, "");
    root.on("department", [](const json&, const std::string&) {});
    root.on("staffing", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        r.integer("cashiers", c.staffing.cashiers);
        r.integer("normal_sellers", c.staffing.normal_sellers);
        r.integer("experts", c.staffing.experts);
        r.integer("section_managers", c.staffing.section_managers);
        r.finish();
    });
    root.number("arrival_rate", c.arrival_rate);
    root.on("calendar", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        r.number("weeks", c.calendar.weeks);
        r.number("days_per_week", c.calendar.days_per_week);
        r.number("hours_per_day", c.calendar.hours_per_day);
        r.finish();
    });
    root.on("levers", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        r.number("empowerment", c.levers.empowerment);
        r.number("empower_to_learn", c.levers.empower_to_learn);
        r.number("competence_threshold", c.levers.competence_threshold);
        r.integer("knowledge_scale", c.levers.knowledge_scale);
        r.integer("points_per_episode", c.levers.points_per_episode);
        r.number("cashier_refund_approval", c.levers.cashier_refund_approval);
        r.number("expert_refund_approval", c.levers.expert_refund_approval);
        r.finish();
    });
    root.on("weights", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        for (auto k : kAllMetricKinds) r.number(std::string(metric_name(k)), c.weights[k]);
        r.finish();
    });
    root.on("customers", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        r.number("p_help", c.customers.p_help);
        r.number("p_direct_till", c.customers.p_direct_till);
        r.number("p_leave_after_browse", c.customers.p_leave_after_browse);
        r.number("p_rebrowse_while_waiting", c.customers.p_rebrowse_while_waiting);
        r.number("p_refund_visit", c.customers.p_refund_visit);
        r.number("p_expert_needed", c.customers.p_expert_needed);
        r.number("p_buy_after_help", c.customers.p_buy_after_help);
        r.finish();
    });
    root.on("timing", [&](const json& v, const std::string& f) {
        ObjectReader r(v, f);
        auto dist = [&](const char* key, Distribution& out) {
            r.on(key, [&](const json& dv, const std::string& df) { out = distribution_from_json(dv, df); });
        };
        dist("browse", c.timing.browse);
        dist("patience_help", c.timing.patience_help);
        dist("patience_till", c.timing.patience_till);
        dist("patience_refund", c.timing.patience_refund);
        dist("help_service", c.timing.help_service);
        dist("expert_help_service", c.timing.expert_help_service);
        dist("payment", c.timing.payment);
        dist("refund_cashier", c.timing.refund_cashier);
        dist("refund_expert", c.timing.refund_expert);
        dist("item_value", c.timing.item_value);
        r.finish();
    });
    root.on("queue_discipline", [&](const json& v, const std::string& f) {
        auto d = v.is_string() ? queue_discipline_from(v.get<std::string>()) : std::nullopt;
        if (!d) throw ConfigError(f, "expected \"longest_wait_first\" or \"need_priority\"");
        c.queue_discipline = *d;
    });
    root.on("seller_selection", [&](const json& v, const std::string& f) {
        auto s = v.is_string() ? seller_selection_from(v.get<std::string>()) : std::nullopt;
        if (!s) throw ConfigError(f, "expected \"least_knowledge_first\" or \"longest_idle_first\"");
        c.seller_selection = *s;
    });
    root.integer("master_seed", c.master_seed);
    root.finish();

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j);
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError(std::string(assignment), "override must look like key.path=value");
    }
    const std::string path(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value = json::parse(raw, nullptr, /*allow_exceptions=*/false);
    if (value.is_discarded()) value = raw;

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError(path, "empty path segment");
        if (!node->is_object()) throw ConfigError(path, "cannot descend into a non-object");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        start = dot + 1;
    }
}

std::string canonical_json(const ScenarioConfig& cfg) { return to_json(cfg).dump(); }

std::string config_digest(const ScenarioConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(canonical_json(cfg))));
    return buf;
}

}  // namespace retailsim
