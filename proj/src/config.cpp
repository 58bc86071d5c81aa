#include "secrescope/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "secrescope/errors.hpp"

namespace secrescope {

namespace {

struct Entry {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, Entry>;

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

[[noreturn]] void fail_at(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_double(const Entry& e, const std::string& key) {
    const std::string& s = e.value;
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    fail_at(e.line, "'" + key + "' expects a number, got '" + s + "'");
}

long to_long(const Entry& e, const std::string& key) {
    double v = to_double(e, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15) fail_at(e.line, "'" + key + "' expects an integer");
    return static_cast<long>(v);
}

bool to_bool(const Entry& e, const std::string& key) {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail_at(e.line, "'" + key + "' expects true or false");
}

// "0, 5, 10" or "start:step:stop".
std::vector<double> to_grid(const Entry& e, const std::string& key) {
    if (e.value.find(':') != std::string::npos) {
        std::vector<double> p;
        std::stringstream in(e.value);
        std::string item;
        while (std::getline(in, item, ':')) p.push_back(to_double({trim(item), e.line}, key));
        if (p.size() != 3 || !(p[1] > 0.0) || p[2] < p[0])
            fail_at(e.line, "'" + key + "' range must be start:step:stop with step > 0");
        std::vector<double> out;
        long n = std::lround(std::floor((p[2] - p[0]) / p[1] + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(p[0] + static_cast<double>(i) * p[1]);
        return out;
    }
    std::vector<double> out;
    for (const auto& item : split_list(e.value)) out.push_back(to_double({item, e.line}, key));
    return out;
}

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> k{
        {"system", {"scenario", "K", "M", "N", "target_rate_bits"}},
        {"first_hop", {"family", "mu", "eta", "kappa", "m", "phi_db"}},
        {"multicast_hop", {"family", "mu", "eta", "kappa", "m", "phi_db"}},
        {"eaves_hop", {"family", "mu", "eta", "kappa", "m", "phi_db"}},
        {"sweep",
         {"axis", "values_db", "metrics", "engines", "tie_first_hop", "series_terms", "max_terms", "prune_eps",
          "integer_exponent_mode"}},
        {"simulation", {"trials", "seed", "mode", "workers"}},
    };
    return k;
}

const Entry& need(const Section& s, const std::string& section, const std::string& key) {
    auto it = s.find(key);
    if (it == s.end()) throw ConfigError("[" + section + "] is missing '" + key + "'");
    return it->second;
}

LinkSpec build_hop(const Section& s, const std::string& name, const std::string& default_family) {
    std::string family = s.count("family") ? s.at("family").value : default_family;
    bool eta = family == "eta_mu" || family == "eta_mu_ig";
    bool kappa = family == "kappa_mu" || family == "kappa_mu_ig";
    bool composite = family == "eta_mu_ig" || family == "kappa_mu_ig";
    if (!eta && !kappa) {
        int line = s.count("family") ? s.at("family").line : 0;
        fail_at(line, "unknown family '" + family + "' (expected eta_mu, eta_mu_ig, kappa_mu or kappa_mu_ig)");
    }
    auto reject = [&](const std::string& key) {
        if (s.count(key)) fail_at(s.at(key).line, "'" + key + "' does not apply to family " + family);
    };
    if (eta) reject("kappa");
    if (kappa) reject("eta");
    if (!composite) reject("m");

    double mu = to_double(need(s, name, "mu"), "mu");
    double phi = db_to_linear(to_double(need(s, name, "phi_db"), "phi_db"));
    double shape = composite ? to_double(need(s, name, "m"), "m") : 0.0;
    LinkSpec spec;
    if (eta) {
        double e = to_double(need(s, name, "eta"), "eta");
        spec = composite ? LinkSpec::eta_mu_ig(mu, e, shape, phi) : LinkSpec::eta_mu(mu, e, phi);
    } else {
        double k = to_double(need(s, name, "kappa"), "kappa");
        spec = composite ? LinkSpec::kappa_mu_ig(mu, k, shape, phi) : LinkSpec::kappa_mu(mu, k, phi);
    }
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError("[" + name + "] " + e.what());
    }
    return spec;
}

std::string fmt_num(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

}  // namespace

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

std::vector<double> parse_grid(const std::string& text) {
    try {
        return to_grid({trim(text), 0}, "values_db");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        const std::string prefix = "line 0: ";
        throw ConfigError(msg.rfind(prefix, 0) == 0 ? msg.substr(prefix.size()) : msg);
    }
}

bool is_axis(const std::string& axis) { return axis == "phi_m_db" || axis == "phi_t_db" || axis == "phi_p_db"; }

SystemConfig apply_axis(const SystemConfig& sys, const std::string& axis, double value_db, bool tie_first_hop) {
    SystemConfig out = sys;
    double phi = db_to_linear(value_db);
    if (axis == "phi_m_db") {
        out.multicast_hop = sys.multicast_hop.with_phi(phi);
        if (tie_first_hop) out.first_hop = sys.first_hop.with_phi(phi);
    } else if (axis == "phi_t_db") {
        out.eaves_hop = sys.eaves_hop.with_phi(phi);
    } else if (axis == "phi_p_db") {
        out.first_hop = sys.first_hop.with_phi(phi);
    } else {
        throw ConfigError("unknown axis '" + axis + "' (expected phi_m_db, phi_t_db or phi_p_db)");
    }
    return out;
}

std::string default_label(const SystemConfig& sys) {
    return std::to_string(sys.scenario) + "|phi_t_db=" + fmt_num(linear_to_db(sys.eaves_hop.phi())) +
           "|target_rate_bits=" + fmt_num(sys.target_rate);
}

void SweepSpec::validate() const {
    base.validate();
    for (const auto& v : variants) {
        try {
            v.sys.validate();
        } catch (const ConfigError& e) {
            throw ConfigError("variant '" + v.label + "': " + e.what());
        }
    }
    if (!is_axis(axis)) throw ConfigError("unknown axis '" + axis + "' (expected phi_m_db, phi_t_db or phi_p_db)");
    if (values_db.empty()) throw ConfigError("values_db must be nonempty");
    for (std::size_t i = 1; i < values_db.size(); ++i)
        if (!(values_db[i] > values_db[i - 1])) throw ConfigError("values_db must be strictly increasing");
    for (double v : values_db)
        if (!std::isfinite(v)) throw ConfigError("values_db must be finite");
    if (metrics.empty()) throw ConfigError("at least one metric is required");
    if (engines.empty()) throw ConfigError("at least one engine is required");
    plan.validate();
    trunc.validate();
}

std::vector<Variant> SweepSpec::curves() const {
    if (!variants.empty()) return variants;
    return {{default_label(base), base}};
}

SweepSpec parse_config(const std::string& text) {
    std::map<std::string, Section> doc;
    std::istringstream in(text);
    std::string raw, current;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find_first_of("#;");
        std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail_at(line, "malformed section header '" + s + "'");
            current = trim(s.substr(1, s.size() - 2));
            if (!allowed_keys().count(current)) fail_at(line, "unknown section [" + current + "]");
            if (doc.count(current)) fail_at(line, "duplicate section [" + current + "]");
            doc[current];
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) fail_at(line, "expected key = value");
        if (current.empty()) fail_at(line, "key outside of any section");
        std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (key.empty()) fail_at(line, "empty key");
        if (!allowed_keys().at(current).count(key)) fail_at(line, "unknown key '" + key + "' in [" + current + "]");
        if (doc[current].count(key)) fail_at(line, "duplicate key '" + key + "'");
        if (value.empty()) fail_at(line, "empty value for '" + key + "'");
        doc[current][key] = {value, line};
    }
    for (const char* req : {"system", "first_hop", "multicast_hop", "eaves_hop"})
        if (!doc.count(req)) throw ConfigError(std::string("missing section [") + req + "]");

    SweepSpec spec;
    const Section& sys = doc["system"];
    SystemConfig& b = spec.base;
    b.scenario = static_cast<int>(to_long(need(sys, "system", "scenario"), "scenario"));
    if (b.scenario != 1 && b.scenario != 2) fail_at(sys.at("scenario").line, "scenario must be 1 or 2");
    b.K = static_cast<int>(to_long(need(sys, "system", "K"), "K"));
    b.M = static_cast<int>(to_long(need(sys, "system", "M"), "M"));
    b.N = static_cast<int>(to_long(need(sys, "system", "N"), "N"));
    if (sys.count("target_rate_bits")) b.target_rate = to_double(sys.at("target_rate_bits"), "target_rate_bits");
    bool s1 = b.scenario == 1;
    b.first_hop = build_hop(doc["first_hop"], "first_hop", s1 ? "eta_mu" : "kappa_mu");
    b.multicast_hop = build_hop(doc["multicast_hop"], "multicast_hop", s1 ? "eta_mu_ig" : "kappa_mu_ig");
    b.eaves_hop = build_hop(doc["eaves_hop"], "eaves_hop", s1 ? "eta_mu_ig" : "kappa_mu_ig");

    spec.values_db = {};
    for (int i = 0; i <= 8; ++i) spec.values_db.push_back(2.5 * i);
    spec.metrics = {Metric::Sopm};
    spec.engines = {Engine::ClosedForm};
    if (doc.count("sweep")) {
        const Section& sw = doc["sweep"];
        auto get = [&](const char* k) -> const Entry* { return sw.count(k) ? &sw.at(k) : nullptr; };
        if (auto e = get("axis")) {
            if (!is_axis(e->value)) fail_at(e->line, "unknown axis '" + e->value + "'");
            spec.axis = e->value;
        }
        if (auto e = get("values_db")) spec.values_db = to_grid(*e, "values_db");
        if (auto e = get("metrics")) {
            spec.metrics.clear();
            for (const auto& m : split_list(e->value)) {
                try {
                    spec.metrics.push_back(parse_metric(m));
                } catch (const ConfigError& err) {
                    fail_at(e->line, err.what());
                }
            }
        }
        if (auto e = get("engines")) {
            spec.engines.clear();
            for (const auto& m : split_list(e->value)) {
                try {
                    spec.engines.push_back(parse_engine(m));
                } catch (const ConfigError& err) {
                    fail_at(e->line, err.what());
                }
            }
        }
        if (auto e = get("tie_first_hop")) spec.tie_first_hop = to_bool(*e, "tie_first_hop");
        if (auto e = get("series_terms")) spec.trunc.series_terms = static_cast<int>(to_long(*e, "series_terms"));
        if (auto e = get("max_terms")) spec.trunc.max_terms = static_cast<std::size_t>(to_long(*e, "max_terms"));
        if (auto e = get("prune_eps")) spec.trunc.prune_eps = to_double(*e, "prune_eps");
        if (auto e = get("integer_exponent_mode"))
            spec.trunc.integer_exponent_mode = to_bool(*e, "integer_exponent_mode");
    }
    if (doc.count("simulation")) {
        const Section& sim = doc["simulation"];
        if (sim.count("trials")) spec.plan.trials = to_long(sim.at("trials"), "trials");
        if (sim.count("seed")) spec.plan.seed = static_cast<std::uint64_t>(to_long(sim.at("seed"), "seed"));
        if (sim.count("workers")) spec.plan.workers = static_cast<int>(to_long(sim.at("workers"), "workers"));
        if (sim.count("mode")) {
            const Entry& e = sim.at("mode");
            if (e.value == "independent")
                spec.plan.mode = SimMode::Independent;
            else if (e.value == "shared_source")
                spec.plan.mode = SimMode::SharedSource;
            else
                fail_at(e.line, "mode must be independent or shared_source");
        }
    }
    spec.validate();
    return spec;
}

SweepSpec load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open config '" + path + "'");
    std::ostringstream s;
    s << f.rdbuf();
    return parse_config(s.str());
}

}  // namespace secrescope
