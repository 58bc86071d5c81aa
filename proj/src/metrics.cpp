#include "secrescope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "secrescope/cascade.hpp"
#include "secrescope/errors.hpp"
#include "secrescope/mcsim.hpp"
#include "secrescope/quadrature.hpp"

namespace secrescope {

namespace {

QuadOptions metric_quad(double noise = 0.0) {
    QuadOptions q;
    q.abs_tol = std::max(1e-11, noise);
    q.rel_tol = 1e-10;
    q.max_panels = 6000;
    return q;
}

double checked(const QuadResult& r) {
    if (!r.converged && r.error > 1e-6)
        throw NumericalError("quadrature did not converge (error estimate " + std::to_string(r.error) + ")");
    return r.value;
}

double bulk_scale(const HopPair& p) { return std::min(mean_link_snr(p.first), mean_link_snr(p.second)); }

constexpr double kNoiseUlps = 16.0 * std::numeric_limits<double>::epsilon();

// Rounding noise of an integral of the density list against a factor in [0, 1].
double density_noise(const TermList& f) {
    double l = termlist_log_l1(f);
    return std::isfinite(l) ? kNoiseUlps * std::exp(l) : 0.0;
}

// Rounding noise of the integral of f * F, each factor carrying noise in
// proportion to its summed term magnitudes; log-grid Riemann estimate.
double product_noise(const TermList& f, const TermList& F, double scale) {
    const double step = std::log(10.0) / 4.0;
    double sum = 0.0;
    for (int k = -24; k <= 24; ++k) {
        double y = scale * std::exp(k * step);
        sum += y * step * (f.evaluate_abs(y) * std::abs(F.evaluate(y)) + std::abs(f.evaluate(y)) * F.evaluate_abs(y));
    }
    return kNoiseUlps * sum;
}

MetricEstimate finish(double v, bool probability, Engine engine, Diagnostics diag) {
    MetricEstimate m;
    m.engine = engine;
    if (probability) {
        double c = std::clamp(v, 0.0, 1.0);
        diag.clamp_excursion = std::abs(v - c);
        v = c;
    }
    m.value = v;
    m.diag = diag;
    return m;
}

}  // namespace

std::string engine_name(Engine e) {
    switch (e) {
        case Engine::ClosedForm: return "closed_form";
        case Engine::Quadrature: return "quadrature";
        case Engine::MonteCarlo: return "monte_carlo";
    }
    return "?";
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Sopm: return "sopm";
        case Metric::Pnsmc: return "pnsmc";
        case Metric::Esmc: return "esmc";
    }
    return "?";
}

Engine parse_engine(const std::string& s) {
    if (s == "closed_form") return Engine::ClosedForm;
    if (s == "quadrature") return Engine::Quadrature;
    if (s == "monte_carlo") return Engine::MonteCarlo;
    throw ConfigError("unknown engine '" + s + "' (expected closed_form, quadrature or monte_carlo)");
}

Metric parse_metric(const std::string& s) {
    if (s == "sopm") return Metric::Sopm;
    if (s == "pnsmc") return Metric::Pnsmc;
    if (s == "esmc") return Metric::Esmc;
    throw ConfigError("unknown metric '" + s + "' (expected sopm, pnsmc or esmc)");
}

ClosedFormModel ClosedFormModel::build(const SystemConfig& sys, const TruncationPolicy& trunc) {
    ClosedFormModel m;
    m.sys_ = sys;
    m.min_ = sigma_min_terms(sys, trunc);
    m.max_ = sigma_max_terms(sys, trunc);
    m.scale_min_ = bulk_scale(sys.main_pair());
    m.scale_max_ = bulk_scale(sys.eaves_pair());

    Diagnostics& d = m.diag_;
    d.norm_min = termlist_integrate(m.min_.pdf);
    d.norm_max = termlist_integrate(m.max_.pdf);
    d.certify_error = std::max(m.min_.certify_error, m.max_.certify_error);
    d.dropped_mass = m.min_.pdf.dropped_mass + m.max_.pdf.dropped_mass;
    d.terms = m.min_.pdf.size() + m.min_.tail.size() + m.max_.pdf.size() + m.max_.tail.size();
    m.noise_min_ = density_noise(m.min_.pdf);
    m.noise_max_ = density_noise(m.max_.pdf);
    d.truncation_flag =
        std::abs(d.norm_min - 1.0) > 1e-2 || std::abs(d.norm_max - 1.0) > 1e-2 || d.certify_error > 1e-6;
    return m;
}

MetricEstimate ClosedFormModel::wrap(double v, bool probability, double noise) const {
    Diagnostics d = diag_;
    d.noise_floor = noise;
    d.truncation_flag = d.truncation_flag || noise > 1e-6;
    return finish(v, probability, Engine::ClosedForm, d);
}

MetricEstimate ClosedFormModel::sopm(double target_rate) const {
    if (!(target_rate >= 0.0)) throw ConfigError("target_rate must be nonnegative");
    // Pr(sigma_min <= 2^R (1 + y) - 1) at sigma_max = y, expanded binomially
    // in y; integrated directly so small outage values keep their digits.
    double q = std::exp2(target_rate);
    TermList below = termlist_one_minus(termlist_affine(min_.tail, q - 1.0, q));
    const TermList& f = max_.pdf;
    auto g = [&](double y) { return f.evaluate(y) * below.evaluate(y); };
    double noise = product_noise(f, below, scale_max_);
    return wrap(checked(integrate_to_infinity(g, 0.0, scale_max_, metric_quad(noise))), true, noise);
}

MetricEstimate ClosedFormModel::pnsmc() const {
    const TermList& f = min_.pdf;
    const TermList& F = max_.tail;
    auto g = [&](double x) { return f.evaluate(x) * F.evaluate(x); };
    double noise = product_noise(f, F, scale_min_);
    return wrap(checked(integrate_to_infinity(g, 0.0, scale_min_, metric_quad(noise))), true, noise);
}

MetricEstimate ClosedFormModel::esmc() const {
    double total_noise = 0.0;
    auto moment = [&total_noise](const TermList& f, double scale, double noise) {
        auto g = [&](double x) { return std::log1p(x) * f.evaluate(x); };
        noise *= std::max(1.0, std::log1p(100.0 * scale));
        total_noise += noise;
        return checked(integrate_to_infinity(g, 0.0, scale, metric_quad(noise)));
    };
    double v = (moment(min_.pdf, scale_min_, noise_min_) - moment(max_.pdf, scale_max_, noise_max_)) /
               std::numbers::ln2;
    return wrap(v, false, total_noise / std::numbers::ln2);
}

QuadratureModel::QuadratureModel(const SystemConfig& sys, const TruncationPolicy& trunc) : sys_(sys), trunc_(trunc) {
    sys.validate();
    trunc.validate();
    // Reference route: CCDF series run to convergence instead of the policy's count.
    for (const LinkSpec* l : {&sys.first_hop, &sys.multicast_hop, &sys.eaves_hop})
        trunc_.series_terms = std::max(trunc_.series_terms, converged_series_terms(*l));
    scale_min_ = bulk_scale(sys.main_pair());
    scale_max_ = bulk_scale(sys.eaves_pair());
}

MetricEstimate QuadratureModel::sopm(double target_rate) const {
    if (!(target_rate >= 0.0)) throw ConfigError("target_rate must be nonnegative");
    double q = std::exp2(target_rate);
    auto g = [&](double y) {
        return pdf_sigma_max_direct(sys_, y, trunc_) * ccdf_sigma_min_direct(sys_, q * (1.0 + y) - 1.0, trunc_);
    };
    double secure = checked(integrate_to_infinity(g, 0.0, scale_max_, metric_quad()));
    return finish(1.0 - secure, true, Engine::Quadrature, {});
}

MetricEstimate QuadratureModel::pnsmc() const {
    auto g = [&](double x) { return pdf_sigma_min_direct(sys_, x, trunc_) * cdf_sigma_max_direct(sys_, x, trunc_); };
    return finish(checked(integrate_to_infinity(g, 0.0, scale_min_, metric_quad())), true, Engine::Quadrature, {});
}

MetricEstimate QuadratureModel::esmc() const {
    auto a = [&](double x) { return std::log1p(x) * pdf_sigma_min_direct(sys_, x, trunc_); };
    auto b = [&](double x) { return std::log1p(x) * pdf_sigma_max_direct(sys_, x, trunc_); };
    double v = checked(integrate_to_infinity(a, 0.0, scale_min_, metric_quad())) -
               checked(integrate_to_infinity(b, 0.0, scale_max_, metric_quad()));
    return finish(v / std::numbers::ln2, false, Engine::Quadrature, {});
}

MetricEstimate evaluate_metric(Metric m, const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc,
                               const SimPlan* plan) {
    sys.validate();
    switch (engine) {
        case Engine::ClosedForm: {
            ClosedFormModel model = ClosedFormModel::build(sys, trunc);
            if (m == Metric::Sopm) return model.sopm(sys.target_rate);
            return m == Metric::Pnsmc ? model.pnsmc() : model.esmc();
        }
        case Engine::Quadrature: {
            QuadratureModel model(sys, trunc);
            if (m == Metric::Sopm) return model.sopm(sys.target_rate);
            return m == Metric::Pnsmc ? model.pnsmc() : model.esmc();
        }
        case Engine::MonteCarlo: {
            SimPlan p = plan ? *plan : SimPlan{};
            McEstimates e = estimate_metrics(sys, p);
            if (m == Metric::Sopm) return e.sopm;
            return m == Metric::Pnsmc ? e.pnsmc : e.esmc;
        }
    }
    throw ConfigError("unknown engine");
}

MetricEstimate sopm(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc, const SimPlan* plan) {
    return evaluate_metric(Metric::Sopm, sys, engine, trunc, plan);
}

MetricEstimate pnsmc(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc, const SimPlan* plan) {
    return evaluate_metric(Metric::Pnsmc, sys, engine, trunc, plan);
}

MetricEstimate esmc(const SystemConfig& sys, Engine engine, const TruncationPolicy& trunc, const SimPlan* plan) {
    return evaluate_metric(Metric::Esmc, sys, engine, trunc, plan);
}

}  // namespace secrescope
