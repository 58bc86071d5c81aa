#include "secrescope/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "secrescope/errors.hpp"
#include "secrescope/mcsim.hpp"

namespace secrescope {

namespace {

// ---------------------------------------------------------------- presets

struct Shape {
    double mu;
    double eta_or_kappa;
};

LinkSpec plain(int scenario, Shape s, double phi) {
    return scenario == 1 ? LinkSpec::eta_mu(s.mu, s.eta_or_kappa, phi) : LinkSpec::kappa_mu(s.mu, s.eta_or_kappa, phi);
}

LinkSpec shadowed(int scenario, Shape s, double m, double phi) {
    return scenario == 1 ? LinkSpec::eta_mu_ig(s.mu, s.eta_or_kappa, m, phi)
                         : LinkSpec::kappa_mu_ig(s.mu, s.eta_or_kappa, m, phi);
}

struct Caption {
    int scenario;
    Shape p, mc, ev;
    double m_m, m_t;
    double phi_t_db;
    int K, M, N;
    double rate;
};

SystemConfig make(const Caption& c) {
    SystemConfig s;
    s.scenario = c.scenario;
    double phi = db_to_linear(10.0);
    s.first_hop = plain(c.scenario, c.p, phi);
    s.multicast_hop = shadowed(c.scenario, c.mc, c.m_m, phi);
    s.eaves_hop = shadowed(c.scenario, c.ev, c.m_t, db_to_linear(c.phi_t_db));
    s.K = c.K;
    s.M = c.M;
    s.N = c.N;
    s.target_rate = c.rate;
    return s;
}

std::string num(double v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

SweepSpec preset_base(Metric metric) {
    SweepSpec s;
    for (int i = 0; i <= 8; ++i) s.values_db.push_back(2.5 * i);
    s.metrics = {metric};
    s.engines = {Engine::ClosedForm, Engine::MonteCarlo};
    return s;
}

void add(SweepSpec& s, const Caption& c, const std::string& what) {
    s.variants.push_back({std::to_string(c.scenario) + "|" + what, make(c)});
}

std::string tag(const char* k, double v) { return std::string(k) + "=" + num(v); }

SweepSpec build_preset(int fig, int scenario) {
    const bool s1 = scenario == 1;
    const double shape_ek = 0.5;  // eta or kappa in every caption but fig 9/10
    SweepSpec s;
    switch (fig) {
        case 2: {
            s = preset_base(Metric::Sopm);
            Shape sh{0.5, shape_ek};
            for (double pt : {5.0, 10.0})
                for (double r : {0.5, 1.0, 2.0})
                    add(s, {scenario, sh, sh, sh, 5, 5, pt, 4, 2, 2, r},
                        tag("phi_t_db", pt) + "|" + tag("target_rate_bits", r));
            break;
        }
        case 3: {
            s = preset_base(Metric::Sopm);
            Shape sh{2, shape_ek};
            for (double pt : {0.0, 5.0, 10.0})
                add(s, {scenario, sh, sh, sh, 5, 5, pt, 2, 2, 2, 0.5}, tag("phi_t_db", pt));
            break;
        }
        case 4: {
            s = preset_base(Metric::Pnsmc);
            Shape p{s1 ? 1.0 : 2.0, shape_ek};
            std::vector<double> mus = s1 ? std::vector<double>{0.5, 1.0, 2.0} : std::vector<double>{1.0, 2.0, 3.0};
            for (double pt : {0.0, 5.0})
                for (double mu : mus) {
                    Shape sh{mu, shape_ek};
                    add(s, {scenario, p, sh, sh, 5, 5, pt, 2, 2, 2, 0.0},
                        tag("phi_t_db", pt) + "|" + tag("mu_m", mu) + "|" + tag("mu_t", mu));
                }
            break;
        }
        case 5: {
            // M = 2 moves both shadowing shapes together, M = 6 only the
            // multicast one.
            s = preset_base(Metric::Pnsmc);
            Shape sh{2, shape_ek};
            for (double m : {3.0, 5.0, 10.0})
                add(s, {scenario, sh, sh, sh, m, m, 0.0, 2, 2, 2, 0.0},
                    tag("M", 2) + "|" + tag("m_m", m) + "|" + tag("m_t", m));
            for (double m : {3.0, 5.0, 10.0})
                add(s, {scenario, sh, sh, sh, m, 5, 0.0, 2, 6, 2, 0.0},
                    tag("M", 6) + "|" + tag("m_m", m) + "|" + tag("m_t", 5));
            break;
        }
        case 6: {
            s = preset_base(Metric::Pnsmc);
            Shape sh{2, shape_ek};
            for (int N : {2, 10})
                for (int K : {1, 2, 3})
                    add(s, {scenario, sh, sh, sh, 5, 5, 0.0, K, 2, N, 0.0}, tag("N", N) + "|" + tag("K", K));
            break;
        }
        case 7: {
            s = preset_base(Metric::Pnsmc);
            Shape sh{2, shape_ek};
            for (double pt : {0.0, 5.0})
                for (int N : {1, 2, 4})
                    add(s, {scenario, sh, sh, sh, 5, 5, pt, 2, 4, N, 0.0}, tag("phi_t_db", pt) + "|" + tag("N", N));
            break;
        }
        case 8: {
            s = preset_base(Metric::Esmc);
            Shape sh{2, shape_ek};
            for (double pt : {0.0, 5.0})
                for (int M : {1, 2, 4})
                    add(s, {scenario, sh, sh, sh, 5, 5, pt, 4, M, 2, 0.5}, tag("phi_t_db", pt) + "|" + tag("M", M));
            break;
        }
        case 9: {
            s = preset_base(Metric::Esmc);
            Shape sh{2, shape_ek};
            std::vector<Shape> firsts = s1 ? std::vector<Shape>{{2, 0.2}, {2, 0.8}, {1, 0.5}, {3, 0.5}}
                                           : std::vector<Shape>{{2, 0.2}, {2, 2.0}, {1, 0.5}, {3, 0.5}};
            const char* name = s1 ? "eta_p" : "kappa_p";
            for (int N : {1, 2})
                for (const Shape& p : firsts)
                    add(s, {scenario, p, sh, sh, 5, 5, 0.0, 4, 2, N, 0.5},
                        tag("N", N) + "|" + tag("mu_p", p.mu) + "|" + tag(name, p.eta_or_kappa));
            break;
        }
        case 10: {
            s = preset_base(Metric::Esmc);
            s.engines = {Engine::ClosedForm, Engine::Quadrature, Engine::MonteCarlo};
            struct Named {
                const char* name;
                Shape sh;
            };
            std::vector<Named> models = s1 ? std::vector<Named>{{"nakagami_m", {1.0, 0.9}},
                                                                {"gaussian", {0.25, 0.9}},
                                                                {"nakagami_q", {0.5, 0.25}}}
                                           : std::vector<Named>{{"rician", {0.9, 5.4}},
                                                                {"rayleigh", {1.0, 1e-6}},
                                                                {"nakagami_m", {1.5, 0.001}}};
            for (const auto& n : models)
                add(s, {scenario, n.sh, n.sh, n.sh, 35, 35, 0.0, 2, 2, 2, 0.5}, n.name);
            break;
        }
        default: break;
    }
    if (fig == 2 && !s1) s.engines = {Engine::ClosedForm, Engine::Quadrature, Engine::MonteCarlo};
    s.base = s.variants.front().sys;
    return s;
}

// ---------------------------------------------------------------- sweep

struct Task {
    std::size_t point;
    std::size_t curve;
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string error_marker(const std::exception& e) {
    if (dynamic_cast<const IntegralityError*>(&e)) return "integrality";
    if (dynamic_cast<const CapacityError*>(&e)) return "capacity";
    return "numerical";
}

MetricEstimate pick(const McEstimates& e, Metric m) {
    return m == Metric::Sopm ? e.sopm : m == Metric::Pnsmc ? e.pnsmc : e.esmc;
}

// Rows for one (axis value, curve): metric-major, engine-minor. Shared setup
// time of an engine is spread evenly over its rows.
std::vector<CsvRow> evaluate_point(const SweepSpec& spec, const Variant& curve, double value_db, int mc_workers) {
    const SystemConfig sys = apply_axis(curve.sys, spec.axis, value_db, spec.tie_first_hop);
    const std::size_t nm = spec.metrics.size(), ne = spec.engines.size();
    std::vector<CsvRow> rows(nm * ne);
    for (std::size_t i = 0; i < nm; ++i)
        for (std::size_t j = 0; j < ne; ++j) {
            CsvRow& r = rows[i * ne + j];
            r.scenario = curve.label;
            r.axis_value_db = value_db;
            r.metric = metric_name(spec.metrics[i]);
            r.engine = engine_name(spec.engines[j]);
            r.series_terms = spec.engines[j] == Engine::MonteCarlo ? 0 : spec.trunc.series_terms;
        }

    for (std::size_t j = 0; j < ne; ++j) {
        const Engine engine = spec.engines[j];
        auto fail_all = [&](const std::exception& e, double elapsed) {
            for (std::size_t i = 0; i < nm; ++i) {
                CsvRow& r = rows[i * ne + j];
                r.value = NAN;
                r.std_error = NAN;
                r.error = error_marker(e);
                r.runtime_ms = std::max(elapsed / static_cast<double>(nm), 1e-6);
            }
        };
        auto put = [&](std::size_t i, const MetricEstimate& e, double elapsed) {
            CsvRow& r = rows[i * ne + j];
            r.value = e.value;
            r.std_error = e.std_error;
            r.dropped_mass = e.diag.dropped_mass;
            r.runtime_ms = std::max(elapsed, 1e-6);
        };
        auto t0 = Clock::now();
        try {
            if (engine == Engine::MonteCarlo) {
                SimPlan plan = spec.plan;
                plan.workers = mc_workers;
                McEstimates e = estimate_metrics(sys, plan);
                double share = ms_since(t0) / static_cast<double>(nm);
                for (std::size_t i = 0; i < nm; ++i) put(i, pick(e, spec.metrics[i]), share);
                continue;
            }
            std::optional<ClosedFormModel> cf;
            std::optional<QuadratureModel> qm;
            if (engine == Engine::ClosedForm)
                cf = ClosedFormModel::build(sys, spec.trunc);
            else
                qm.emplace(sys, spec.trunc);
            double setup = ms_since(t0) / static_cast<double>(nm);
            for (std::size_t i = 0; i < nm; ++i) {
                auto t1 = Clock::now();
                MetricEstimate e;
                switch (spec.metrics[i]) {
                    case Metric::Sopm: e = cf ? cf->sopm(sys.target_rate) : qm->sopm(sys.target_rate); break;
                    case Metric::Pnsmc: e = cf ? cf->pnsmc() : qm->pnsmc(); break;
                    case Metric::Esmc: e = cf ? cf->esmc() : qm->esmc(); break;
                }
                put(i, e, setup + ms_since(t1));
            }
        } catch (const NumericalError& e) {
            fail_all(e, ms_since(t0));
        }
    }
    return rows;
}

// ---------------------------------------------------------------- csv

const char* kHeader = "scenario,axis_value_db,metric,engine,value,stderr,series_terms,dropped_mass,runtime_ms";

std::string g17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_num(const std::string& s, int line) {
    if (s == "nan") return NAN;
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw IoError("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

}  // namespace

std::vector<std::string> figure_names() {
    std::vector<std::string> out;
    for (int f = 2; f <= 10; ++f)
        for (char c : {'a', 'b'}) out.push_back("fig" + std::to_string(f) + c);
    return out;
}

SweepSpec figure_preset(const std::string& name) {
    auto names = figure_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::string list;
        for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (valid: " + list + ")");
    }
    int fig = std::stoi(name.substr(3, name.size() - 4));
    int scenario = name.back() == 'a' ? 1 : 2;
    SweepSpec s = build_preset(fig, scenario);
    s.validate();
    return s;
}

std::vector<CsvRow> run_sweep(const SweepSpec& spec, const ProgressFn& progress) {
    spec.validate();
    const std::vector<Variant> curves = spec.curves();
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < spec.values_db.size(); ++p)
        for (std::size_t c = 0; c < curves.size(); ++c) tasks.push_back({p, c});

    std::vector<std::vector<CsvRow>> out(tasks.size());
    const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(spec.plan.workers), tasks.size()));
    // With one point in flight, Monte Carlo gets every worker; otherwise the
    // pool is spent across points.
    const int mc_workers = workers <= 1 ? spec.plan.workers : 1;
    std::atomic<std::size_t> next{0}, done{0};
    std::mutex progress_mu;
    std::exception_ptr failure;
    std::mutex failure_mu;

    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < tasks.size(); i = next.fetch_add(1)) {
            try {
                out[i] = evaluate_point(spec, curves[tasks[i].curve], spec.values_db[tasks[i].point], mc_workers);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next = tasks.size();
                return;
            }
            std::size_t d = ++done;
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mu);
                progress(d, tasks.size());
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<CsvRow> rows;
    for (auto& part : out) rows.insert(rows.end(), part.begin(), part.end());
    return rows;
}

void write_csv(const std::vector<CsvRow>& rows, std::ostream& out) {
    out << kHeader << '\n';
    for (const auto& r : rows) {
        std::string label = r.scenario;
        std::replace(label.begin(), label.end(), ',', ';');
        out << label << ',' << g17(r.axis_value_db) << ',' << r.metric << ',' << r.engine << ','
            << (r.error.empty() ? g17(r.value) : "error:" + r.error) << ',' << g17(r.std_error) << ','
            << r.series_terms << ',' << g17(r.dropped_mass) << ',' << g17(r.runtime_ms) << '\n';
    }
}

void save_csv(const std::vector<CsvRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    write_csv(rows, f);
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::vector<CsvRow> read_csv(std::istream& in) {
    std::vector<CsvRow> rows;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (n == 1) {
            if (line != kHeader) throw IoError("csv header mismatch");
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw IoError("csv line " + std::to_string(n) + ": expected 9 fields");
        CsvRow r;
        r.scenario = f[0];
        r.axis_value_db = parse_num(f[1], n);
        r.metric = f[2];
        r.engine = f[3];
        if (f[4].rfind("error:", 0) == 0) {
            r.error = f[4].substr(6);
            r.value = NAN;
        } else {
            r.value = parse_num(f[4], n);
        }
        r.std_error = parse_num(f[5], n);
        r.series_terms = static_cast<int>(parse_num(f[6], n));
        r.dropped_mass = parse_num(f[7], n);
        r.runtime_ms = parse_num(f[8], n);
        rows.push_back(r);
    }
    if (n == 0) throw IoError("empty csv");
    return rows;
}

std::vector<CsvRow> load_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    return read_csv(f);
}

void write_matrix(const std::vector<CsvRow>& rows, std::ostream& out) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const CsvRow*>> blocks;
    for (const auto& r : rows) {
        std::string key = r.scenario + " " + r.metric + " " + r.engine;
        if (!blocks.count(key)) order.push_back(key);
        blocks[key].push_back(&r);
    }
    bool first = true;
    for (const auto& key : order) {
        if (!first) out << "\n\n";
        first = false;
        out << "# " << key << '\n';
        auto& b = blocks[key];
        std::stable_sort(b.begin(), b.end(),
                         [](const CsvRow* a, const CsvRow* c) { return a->axis_value_db < c->axis_value_db; });
        for (const CsvRow* r : b) out << g17(r->axis_value_db) << ' ' << g17(r->value) << ' ' << g17(r->std_error) << '\n';
    }
}

}  // namespace secrescope
