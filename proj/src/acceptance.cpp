#include "secrescope/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "secrescope/cascade.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/extremes.hpp"
#include "secrescope/harness.hpp"
#include "secrescope/mcsim.hpp"
#include "secrescope/quadrature.hpp"
#include "secrescope/specfun.hpp"

namespace secrescope {

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<double> kGrid{0.0, 5.0, 10.0, 15.0, 20.0};

struct Tracker {
    explicit Tracker(const AcceptanceOptions& o) : opt(o) {}

    const AcceptanceOptions& opt;
    bool ok = true;
    int checks = 0;
    int failures = 0;
    double worst = 0.0;  // worst ratio of error to tolerance
    std::string worst_what;

    // Records |err| against tol; logs failures, and every check when verbose.
    void check(const std::string& what, double err, double tol) {
        ++checks;
        double ratio = std::isfinite(err) ? err / tol : INFINITY;
        bool pass = ratio <= 1.0;
        if (!pass) {
            ok = false;
            ++failures;
        }
        if (ratio > worst || worst_what.empty()) {
            worst = ratio;
            worst_what = what;
        }
        if (opt.log) *opt.log << "  " << (pass ? "ok   " : "FAIL ") << what << " err=" << err << " tol=" << tol << '\n';
    }

    void fail(const std::string& what) { check(what, INFINITY, 1.0); }

    std::string summary() const {
        std::ostringstream o;
        o << checks << " checks, " << failures << " failed; worst " << worst_what << " at " << worst << "x tolerance";
        return o.str();
    }
};

double integral(const std::function<double(double)>& f, double scale) {
    QuadOptions q;
    q.abs_tol = 1e-10;
    q.rel_tol = 1e-10;
    q.max_panels = 6000;
    return integrate_to_infinity(f, 0.0, scale, q).value;
}

SystemConfig at(const SweepSpec& s, std::size_t variant, double db) {
    return apply_axis(s.variants[variant].sys, s.axis, db, s.tie_first_hop);
}

double link_scale(const LinkSpec& l) { return mean_link_snr(l); }
double pair_scale(const HopPair& p) { return std::min(link_scale(p.first), link_scale(p.second)); }

bool integer_config(const SystemConfig& sys, const TruncationPolicy& t) {
    return integer_shapes(sys.first_hop, t.series_terms) && integer_shapes(sys.multicast_hop, t.series_terms) &&
           integer_shapes(sys.eaves_hop, t.series_terms);
}

template <class Model>
MetricEstimate pick_estimate(Metric m, const SystemConfig& sys, const Model& e) {
    return m == Metric::Sopm ? e.sopm(sys.target_rate) : m == Metric::Pnsmc ? e.pnsmc() : e.esmc();
}

double pick(Metric m, const SystemConfig& sys, const ClosedFormModel& cf) { return pick_estimate(m, sys, cf).value; }

double pick(Metric m, const SystemConfig& sys, const QuadratureModel& q) { return pick_estimate(m, sys, q).value; }

// ------------------------------------------------------------ criterion 1

void normalization(Tracker& t) {
    TruncationPolicy tr;
    std::vector<std::string> figs{"fig2a", "fig2b", "fig5a", "fig5b", "fig6a", "fig6b", "fig7a", "fig7b"};
    for (const auto& name : figs) {
        SweepSpec s = figure_preset(name);
        SystemConfig sys = at(s, 0, 10.0);
        const char* roles[] = {"first", "multicast", "eaves"};
        const LinkSpec* links[] = {&sys.first_hop, &sys.multicast_hop, &sys.eaves_hop};
        for (int i = 0; i < 3; ++i) {
            const LinkSpec& l = *links[i];
            double sc = link_scale(l);
            t.check(name + " " + roles[i] + " link series pdf",
                    std::abs(integral([&](double x) { return pdf_link(l, x, tr); }, sc) - 1.0), 1e-3);
            t.check(name + " " + roles[i] + " link direct pdf",
                    std::abs(integral([&](double x) { return pdf_link_direct(l, x); }, sc) - 1.0), 1e-3);
        }
        HopPair pair = sys.main_pair();
        double sc = pair_scale(pair);
        t.check(name + " dual-hop pdf", std::abs(integral([&](double x) { return pdf_dualhop(pair, x, tr); }, sc) - 1.0),
                1e-3);
        bool integer = integer_config(sys, tr);
        if (integer) {
            DualHopTerms dh = dualhop_terms(CoefficientCache::build(pair, tr));
            t.check(name + " dual-hop terms", std::abs(termlist_integrate(dh.pdf) - 1.0), 1e-3);
        }
        for (int K : {1, 2, 4})
            t.check(name + " best relay K=" + std::to_string(K),
                    std::abs(integral([&](double x) { return pdf_best_relay(pair, K, x, tr); }, sc) - 1.0), 1e-3);
        if (!integer) continue;
        bool fig6 = name.rfind("fig6", 0) == 0;
        if (!fig6) {
            for (int M : {1, 2, 6}) {
                SystemConfig c = sys;
                c.M = M;
                t.check(name + " sigma_min terms M=" + std::to_string(M),
                        std::abs(termlist_integrate(sigma_min_terms(c, tr).pdf) - 1.0), 1e-2);
            }
            for (int N : {1, 2}) {
                SystemConfig c = sys;
                c.N = N;
                t.check(name + " sigma_max terms N=" + std::to_string(N),
                        std::abs(termlist_integrate(sigma_max_terms(c, tr).pdf) - 1.0), 1e-2);
            }
        } else {
            SystemConfig c = sys;
            c.K = 2;
            c.N = 10;
            t.check(name + " sigma_max terms N=10 K=2", std::abs(termlist_integrate(sigma_max_terms(c, tr).pdf) - 1.0),
                    1e-2);
        }
    }
}

// ------------------------------------------------------------ criterion 2

struct KsCase {
    std::string name;
    LinkSpec spec;
};

std::vector<KsCase> ks_cases() {
    return {
        {"eta_mu(0.5,0.5,2)", LinkSpec::eta_mu(0.5, 0.5, 2.0)},
        {"eta_mu(1.5,0.2,1)", LinkSpec::eta_mu(1.5, 0.2, 1.0)},
        {"kappa_mu(2,0.5,1)", LinkSpec::kappa_mu(2.0, 0.5, 1.0)},
        {"kappa_mu(1,5.4,3)", LinkSpec::kappa_mu(1.0, 5.4, 3.0)},
        {"eta_mu_ig(0.5,0.5,5,10)", LinkSpec::eta_mu_ig(0.5, 0.5, 5.0, 10.0)},
        {"eta_mu_ig(2,0.25,3,1)", LinkSpec::eta_mu_ig(2.0, 0.25, 3.0, 1.0)},
        {"kappa_mu_ig(2,0.5,5,10)", LinkSpec::kappa_mu_ig(2.0, 0.5, 5.0, 10.0)},
        {"kappa_mu_ig(1,2,10,2)", LinkSpec::kappa_mu_ig(1.0, 2.0, 10.0, 2.0)},
    };
}

// Largest gap between the empirical CDF of `draws` samples and the CDF
// obtained by integrating the unexpanded density.
double ks_distance(const LinkSpec& spec, int draws, std::uint64_t seed) {
    Rng rng = substream(seed, 0);
    std::vector<double> x(static_cast<std::size_t>(draws));
    for (double& v : x) v = sample_link_snr(spec, rng);
    std::sort(x.begin(), x.end());

    const int nodes = 3000;
    double lo = x.front() * 0.5, hi = x.back() * 1.01;
    std::vector<double> grid(nodes), cdf(nodes);
    QuadOptions q;
    q.abs_tol = 1e-12;
    q.rel_tol = 1e-10;
    auto f = [&](double s) { return pdf_link_direct(spec, s); };
    for (int i = 0; i < nodes; ++i) grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (nodes - 1));
    cdf[0] = integrate(f, 0.0, grid[0], q).value;
    for (int i = 1; i < nodes; ++i) cdf[i] = cdf[i - 1] + integrate(f, grid[i - 1], grid[i], q).value;

    double d = 0.0;
    const double n = static_cast<double>(draws);
    std::size_t k = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        while (k + 2 < grid.size() && grid[k + 1] < x[i]) ++k;
        double w = (x[i] - grid[k]) / (grid[k + 1] - grid[k]);
        double F = cdf[k] + w * (cdf[k + 1] - cdf[k]);
        d = std::max({d, std::abs(F - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - F)});
    }
    return d;
}

void sampler_law(Tracker& t) {
    const double crit = 0.00515 * std::numbers::sqrt2;
    std::uint64_t seed = 2024;
    for (const auto& c : ks_cases()) t.check("KS " + c.name, ks_distance(c.spec, 100000, seed++), crit);
}

// ------------------------------------------------------------ criterion 3

void cross_engine(Tracker& t) {
    TruncationPolicy tr;
    // Closed form against quadrature on every integer-exponent preset curve.
    for (const auto& name : figure_names()) {
        SweepSpec s = figure_preset(name);
        for (std::size_t v = 0; v < s.variants.size(); ++v) {
            if (!integer_config(s.variants[v].sys, tr)) continue;
            for (double db : kGrid) {
                SystemConfig sys = at(s, v, db);
                ClosedFormModel cf = ClosedFormModel::build(sys, tr);
                QuadratureModel qm(sys, tr);
                for (Metric m : {Metric::Sopm, Metric::Pnsmc, Metric::Esmc}) {
                    double a = pick(m, sys, cf), b = pick(m, sys, qm);
                    t.check("cf~quad " + s.variants[v].label + " @" + std::to_string(static_cast<int>(db)) + "dB " +
                                metric_name(m),
                            std::abs(a - b), 1e-3 * std::max(std::abs(b), 1e-3));
                }
            }
        }
    }
    // Quadrature against simulation, first and last curve of each figure.
    SimPlan plan;
    plan.trials = 1000000;
    plan.mode = SimMode::Independent;
    plan.workers = t.opt.workers;
    for (const char* name : {"fig2a", "fig3a", "fig4a", "fig6a", "fig7a", "fig8a"}) {
        SweepSpec s = figure_preset(name);
        Metric m = s.metrics.front();
        for (std::size_t v : {std::size_t{0}, s.variants.size() - 1}) {
            for (double db : kGrid) {
                SystemConfig sys = at(s, v, db);
                double q = pick(m, sys, QuadratureModel(sys, tr));
                McEstimates e = estimate_metrics(sys, plan);
                MetricEstimate mc = m == Metric::Sopm ? e.sopm : m == Metric::Pnsmc ? e.pnsmc : e.esmc;
                t.check("quad~mc " + s.variants[v].label + " @" + std::to_string(static_cast<int>(db)) + "dB " +
                            metric_name(m),
                        std::abs(q - mc.value), std::max(3.0 * mc.std_error, 0.01));
            }
        }
    }
}

// ------------------------------------------------------------ criterion 4

SystemConfig symmetric(int scenario) {
    double phi = db_to_linear(10.0);
    SystemConfig s;
    s.scenario = scenario;
    if (scenario == 1) {
        s.first_hop = LinkSpec::eta_mu(2.0, 0.5, phi);
        s.multicast_hop = LinkSpec::eta_mu_ig(2.0, 0.5, 5.0, phi);
    } else {
        s.first_hop = LinkSpec::kappa_mu(2.0, 0.5, phi);
        s.multicast_hop = LinkSpec::kappa_mu_ig(2.0, 0.5, 5.0, phi);
    }
    s.eaves_hop = s.multicast_hop;
    s.K = s.M = s.N = 1;
    return s;
}

void identities(Tracker& t) {
    SimPlan plan;
    plan.trials = 1000000;
    plan.workers = t.opt.workers;
    for (int scenario : {1, 2}) {
        McEstimates e = estimate_metrics(symmetric(scenario), plan);
        std::string sc = "scenario " + std::to_string(scenario);
        t.check(sc + " symmetric pnsmc = 1/2 (mc)", std::abs(e.pnsmc.value - 0.5), 3.0 * e.pnsmc.std_error);
        t.check(sc + " symmetric esmc = 0 (mc)", std::abs(e.esmc.value), 3.0 * e.esmc.std_error);
    }
    TruncationPolicy tr;
    for (const char* name : {"fig2a", "fig3b"}) {
        SweepSpec s = figure_preset(name);
        for (double db : {0.0, 10.0, 20.0}) {
            SystemConfig sys = at(s, 0, db);
            ClosedFormModel cf = ClosedFormModel::build(sys, tr);
            std::string w = std::string(name) + " @" + std::to_string(static_cast<int>(db)) + "dB";
            t.check(w + " sopm(0) = 1 - pnsmc", std::abs(cf.sopm(0.0).value - (1.0 - cf.pnsmc().value)), 2e-3);
            t.check(w + " sopm(20 bits) = 1", std::abs(1.0 - cf.sopm(20.0).value), 2e-3);
        }
    }
}

// ------------------------------------------------------------ criterion 5

// One curve family: configs ordered by the varied parameter; `rising` says
// which way the metric must move.
struct Trend {
    std::string what;
    std::string fig;
    Metric metric;
    bool rising;
    std::vector<std::vector<std::size_t>> groups;  // variant indices, in order
};

MetricEstimate any_engine(Metric m, const SystemConfig& sys, const TruncationPolicy& tr) {
    try {
        return pick_estimate(m, sys, ClosedFormModel::build(sys, tr));
    } catch (const IntegralityError&) {
        return pick_estimate(m, sys, QuadratureModel(sys, tr));
    }
}

void trends(Tracker& t) {
    TruncationPolicy tr;
    std::vector<Trend> list;
    for (const char* sfx : {"a", "b"}) {
        std::string x = sfx;
        list.push_back({"sopm rises with target rate", "fig2" + x, Metric::Sopm, true, {{0, 1, 2}, {3, 4, 5}}});
        list.push_back({"sopm rises with phi_t", "fig3" + x, Metric::Sopm, true, {{0, 1, 2}}});
        list.push_back({"pnsmc rises with mu_m", "fig4" + x, Metric::Pnsmc, true, {{0, 1, 2}, {3, 4, 5}}});
        list.push_back({"pnsmc rises with m_m", "fig5" + x, Metric::Pnsmc, true, {{0, 1, 2}, {3, 4, 5}}});
        list.push_back({"pnsmc rises with K", "fig6" + x, Metric::Pnsmc, true, {{0, 1, 2}, {3, 4, 5}}});
        list.push_back({"pnsmc falls with N", "fig7" + x, Metric::Pnsmc, false, {{0, 1, 2}, {3, 4, 5}}});
        list.push_back({"esmc falls with M", "fig8" + x, Metric::Esmc, false, {{0, 1, 2}, {3, 4, 5}}});
    }
    for (const auto& tr_ : list) {
        SweepSpec s = figure_preset(tr_.fig);
        for (const auto& g : tr_.groups) {
            for (double db : kGrid) {
                std::vector<double> v, noise;
                for (std::size_t i : g) {
                    MetricEstimate e = any_engine(tr_.metric, at(s, i, db), tr);
                    v.push_back(e.value);
                    noise.push_back(e.diag.noise_floor);
                }
                for (std::size_t k = 1; k < v.size(); ++k) {
                    double step = tr_.rising ? v[k] - v[k - 1] : v[k - 1] - v[k];
                    // Deterministic engines: allow only reversals within round-off
                    // and the rounding noise each evaluation reports for itself.
                    double slack = 1e-9 + 1e-7 * std::abs(v[k]) + noise[k] + noise[k - 1];
                    t.check(tr_.fig + " " + tr_.what + " [" + s.variants[g[k - 1]].label + " -> " +
                                s.variants[g[k]].label + "] @" + std::to_string(static_cast<int>(db)) + "dB",
                            std::max(0.0, -step), slack);
                }
            }
        }
    }
}

// ------------------------------------------------------------ criterion 6

void truncation_stability(Tracker& t) {
    TruncationPolicy t25, t40;
    t40.series_terms = 40;
    SweepSpec s = figure_preset("fig2a");
    for (std::size_t v = 0; v < s.variants.size(); ++v)
        for (double db : kGrid) {
            SystemConfig sys = at(s, v, db);
            ClosedFormModel a = ClosedFormModel::build(sys, t25), b = ClosedFormModel::build(sys, t40);
            for (Metric m : {Metric::Sopm, Metric::Pnsmc, Metric::Esmc})
                t.check(s.variants[v].label + " @" + std::to_string(static_cast<int>(db)) + "dB " + metric_name(m),
                        std::abs(pick(m, sys, a) - pick(m, sys, b)), 1e-3);
        }
}

// ------------------------------------------------------------ criterion 7

double rician_power_pdf(double K, double phi, double x) {
    double a = (1.0 + K) / phi;
    return a * std::exp(-K - a * x) * std::cyl_bessel_i(0.0, 2.0 * std::sqrt(K * a * x));
}

double nakagami_power_pdf(double m, double phi, double x) {
    return std::exp(m * std::log(m / phi) + (m - 1.0) * std::log(x) - m * x / phi - std::lgamma(m));
}

template <class F, class G>
double sup_gap(F f, G g, double hi) {
    double worst = 0.0;
    for (int i = 1; i <= 400; ++i) {
        double x = hi * i / 400.0;
        worst = std::max(worst, std::abs(f(x) - g(x)));
    }
    return worst;
}

void reductions(Tracker& t) {
    TruncationPolicy tr;
    for (double K : {0.5, 3.0}) {
        LinkSpec l = LinkSpec::kappa_mu(1.0, K, 1.0);
        auto ref = [&](double x) { return rician_power_pdf(K, 1.0, x); };
        t.check("kappa_mu(mu=1, kappa=" + std::to_string(K) + ") series = rician",
                sup_gap([&](double x) { return pdf_link(l, x, tr); }, ref, 12.0), 1e-8);
        t.check("kappa_mu(mu=1, kappa=" + std::to_string(K) + ") direct = rician",
                sup_gap([&](double x) { return pdf_link_direct(l, x); }, ref, 12.0), 1e-8);
    }
    {
        LinkSpec l = LinkSpec::kappa_mu(1.5, 1e-9, 1.0);
        auto ref = [&](double x) { return nakagami_power_pdf(1.5, 1.0, x); };
        t.check("kappa_mu(kappa=1e-9, mu=1.5) series = nakagami",
                sup_gap([&](double x) { return pdf_link(l, x, tr); }, ref, 8.0), 1e-4);
        t.check("kappa_mu(kappa=1e-9, mu=1.5) direct = nakagami",
                sup_gap([&](double x) { return pdf_link_direct(l, x); }, ref, 8.0), 1e-4);
    }
    const double m = 1e4, phi = 2.0, mean = phi * m / (m - 1.0);
    LinkSpec e_ig = LinkSpec::eta_mu_ig(1.5, 0.5, m, phi), e = LinkSpec::eta_mu(1.5, 0.5, mean);
    LinkSpec k_ig = LinkSpec::kappa_mu_ig(2.0, 1.0, m, phi), k = LinkSpec::kappa_mu(2.0, 1.0, mean);
    t.check("eta_mu_ig(m=1e4) series = eta_mu",
            sup_gap([&](double x) { return pdf_link(e_ig, x, tr); }, [&](double x) { return pdf_link_direct(e, x); },
                    12.0),
            1e-3);
    t.check("eta_mu_ig(m=1e4) direct = eta_mu",
            sup_gap([&](double x) { return pdf_link_direct(e_ig, x); },
                    [&](double x) { return pdf_link_direct(e, x); }, 12.0),
            1e-3);
    t.check("kappa_mu_ig(m=1e4) series = kappa_mu",
            sup_gap([&](double x) { return pdf_link(k_ig, x, tr); }, [&](double x) { return pdf_link_direct(k, x); },
                    12.0),
            1e-3);
    t.check("kappa_mu_ig(m=1e4) direct = kappa_mu",
            sup_gap([&](double x) { return pdf_link_direct(k_ig, x); },
                    [&](double x) { return pdf_link_direct(k, x); }, 12.0),
            1e-3);
}

// ------------------------------------------------------------ criterion 8

void term_algebra(Tracker& t) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TruncationPolicy exact;
    exact.prune_eps = 0.0;
    for (int trial = 0; trial < 40; ++trial) {
        double beta = trial % 2 ? 0.3 + 2.0 * u(rng) : 0.0;
        TermList a = TermList::empty_like(exact, beta);
        int n_terms = 2 + static_cast<int>(4 * u(rng));
        for (int i = 0; i < n_terms; ++i) {
            double c = 0.1 + u(rng);
            double power = std::floor(4 * u(rng));
            double rate = 0.2 + 1.8 * u(rng);
            double shadow = beta > 0.0 ? 3.0 * u(rng) : 0.0;
            a.push(SignedLog::from(c), power, rate, shadow);
        }
        a.compact();
        int n = 2 + trial % 5;
        TermList p = termlist_power(a, n);
        double worst = 0.0;
        for (int i = 1; i <= 60; ++i) {
            double x = 0.02 * std::pow(1000.0, i / 60.0);
            double want = std::pow(a.evaluate(x), n);
            worst = std::max(worst, std::abs(p.evaluate(x) - want) / std::abs(want));
        }
        t.check("termlist_power trial " + std::to_string(trial) + " n=" + std::to_string(n), worst, 1e-9);
    }

    TruncationPolicy tr;
    for (const char* name : {"fig2a", "fig3a", "fig3b", "fig8b"}) {
        SweepSpec s = figure_preset(name);
        SystemConfig sys = at(s, 0, 10.0);
        sys.M = 1;
        sys.N = 1;
        TermList mn = sigma_min_terms(sys, tr).pdf, mx = sigma_max_terms(sys, tr).pdf;
        double hi_min = 8.0 * pair_scale(sys.main_pair()), hi_max = 8.0 * pair_scale(sys.eaves_pair());
        t.check(std::string(name) + " sigma_min(M=1) = best relay",
                sup_gap([&](double x) { return mn.evaluate(x); },
                        [&](double x) { return pdf_best_relay(sys.main_pair(), sys.K, x, tr); }, hi_min),
                1e-6);
        t.check(std::string(name) + " sigma_max(N=1) = best relay",
                sup_gap([&](double x) { return mx.evaluate(x); },
                        [&](double x) { return pdf_best_relay(sys.eaves_pair(), sys.K, x, tr); }, hi_max),
                1e-6);
    }
}

struct Spec {
    const char* name;
    double budget;
    void (*run)(Tracker&);
};

const Spec kCriteria[] = {
    {"normalization", 120.0, normalization},  {"sampler-law", 60.0, sampler_law},
    {"cross-engine", 900.0, cross_engine},    {"trivial-identity", 120.0, identities},
    {"trend", 1200.0, trends},                {"truncation-stability", 120.0, truncation_stability},
    {"reduction", 60.0, reductions},          {"term-algebra", 60.0, term_algebra},
};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    if (id < 1 || id > 8) throw std::out_of_range("criterion id must be 1..8");
    const Spec& spec = kCriteria[id - 1];
    CriterionResult r;
    r.id = id;
    r.name = spec.name;
    r.budget_seconds = spec.budget;
    Tracker t(opt);
    auto t0 = Clock::now();
    try {
        spec.run(t);
    } catch (const std::exception& e) {
        t.fail(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    r.check_passed = t.ok;
    r.detail = t.summary();
    return r;
}

std::string format_result(const CriterionResult& r) {
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(1);
    o << "criterion " << r.id << " " << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << " (" << r.seconds
      << " s of " << r.budget_seconds << " s) " << r.detail;
    if (r.check_passed && !r.passed()) o << "; over time budget";
    return o.str();
}

bool run_selfcheck(std::ostream& out) {
    struct Spot {
        const char* what;
        double got, want, tol;
    };
    std::vector<Spot> spots{
        {"Ei(1)", exp_integral_ei(1.0), 1.8951178163559368, 1e-12},
        {"ln Gamma(5)", ln_gamma(5.0), std::log(24.0), 1e-13},
        {"Q(2, 1)", upper_inc_gamma_q(2.0, 1.0), 2.0 / std::numbers::e, 1e-13},
        {"2F1(1,1;2;1/2)", gauss_2f1(1.0, 1.0, 2.0, 0.5), 2.0 * std::numbers::ln2, 1e-13},
        {"1F1(1;2;1)", confluent_1f1(1.0, 2.0, 1.0), std::numbers::e - 1.0, 1e-13},
        {"e^-1 I0(1)", bessel_i_scaled(0.0, 1.0), std::cyl_bessel_i(0.0, 1.0) * std::exp(-1.0), 1e-13},
    };
    bool ok = true;
    for (const auto& s : spots) {
        double err = std::abs(s.got - s.want) / std::max(1.0, std::abs(s.want));
        bool pass = err <= s.tol;
        ok = ok && pass;
        out << (pass ? "ok   " : "FAIL ") << s.what << " = " << s.got << " (err " << err << ")\n";
    }
    const double crit = 0.00515 * std::numbers::sqrt2;
    std::uint64_t seed = 2024;
    for (const auto& c : ks_cases()) {
        double d = ks_distance(c.spec, 100000, seed++);
        bool pass = d < crit;
        ok = ok && pass;
        out << (pass ? "ok   " : "FAIL ") << "KS " << c.name << " D = " << d << " (critical " << crit << ")\n";
    }
    return ok;
}

}  // namespace secrescope
