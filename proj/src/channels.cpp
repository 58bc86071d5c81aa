#include "secrescope/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "secrescope/errors.hpp"
#include "secrescope/specfun.hpp"

namespace secrescope {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double lpoch(double x, int n) { return ln_gamma(x + n) - ln_gamma(x); }

struct EtaConsts {
    double h, H;
};

// The law depends on eta only through eta^2, so |eta| is used throughout.
EtaConsts eta_consts(double eta) {
    double e = std::abs(eta);
    double d = 1.0 - e * e;
    return {1.0 / d, e / d};
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

double log_sum(const std::vector<double>& logs) {
    double mx = -INFINITY;
    for (double l : logs) mx = std::max(mx, l);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return mx + std::log(s);
}

}  // namespace

void TruncationPolicy::validate() const {
    if (series_terms < 1) throw ConfigError("series_terms must be at least 1");
    if (max_terms < 1) throw ConfigError("max_terms must be at least 1");
    if (!(prune_eps >= 0.0 && prune_eps <= 1e-6)) throw ConfigError("prune_eps must lie in [0, 1e-6]");
}

std::string family_name(Family f) {
    switch (f) {
        case Family::EtaMu: return "eta_mu";
        case Family::EtaMuIG: return "eta_mu_ig";
        case Family::KappaMu: return "kappa_mu";
        case Family::KappaMuIG: return "kappa_mu_ig";
    }
    return "?";
}

LinkSpec LinkSpec::eta_mu(double mu, double eta, double phi) { return {EtaMuParams{mu, eta, phi}}; }
LinkSpec LinkSpec::eta_mu_ig(double mu, double eta, double m, double phi) {
    return {EtaMuIGParams{mu, eta, m, phi}};
}
LinkSpec LinkSpec::kappa_mu(double mu, double kappa, double phi) { return {KappaMuParams{mu, kappa, phi}}; }
LinkSpec LinkSpec::kappa_mu_ig(double mu, double kappa, double m, double phi) {
    return {KappaMuIGParams{mu, kappa, m, phi}};
}

double LinkSpec::mu() const {
    return std::visit([](const auto& p) { return p.mu; }, params);
}

double LinkSpec::phi() const {
    return std::visit([](const auto& p) { return p.phi; }, params);
}

double LinkSpec::m() const {
    return std::visit(overloaded{[](const EtaMuIGParams& p) { return p.m; },
                                 [](const KappaMuIGParams& p) { return p.m; },
                                 [](const auto&) { return 0.0; }},
                      params);
}

LinkSpec LinkSpec::with_phi(double phi) const {
    LinkSpec s = *this;
    std::visit([phi](auto& p) { p.phi = phi; }, s.params);
    return s;
}

LinkSpec LinkSpec::with_mu(double mu) const {
    LinkSpec s = *this;
    std::visit([mu](auto& p) { p.mu = mu; }, s.params);
    return s;
}

LinkSpec LinkSpec::with_m(double m) const {
    LinkSpec s = *this;
    std::visit(overloaded{[m](EtaMuIGParams& p) { p.m = m; }, [m](KappaMuIGParams& p) { p.m = m; },
                          [](auto&) { throw ConfigError("m applies only to composite links"); }},
               s.params);
    return s;
}

void LinkSpec::validate() const {
    std::visit(overloaded{[](const EtaMuParams& p) {
                              require(p.mu > 0, "mu must be positive");
                              require(p.eta > -1 && p.eta < 1, "eta must lie in (-1, 1)");
                              require(p.phi > 0, "phi must be positive");
                          },
                          [](const EtaMuIGParams& p) {
                              require(p.mu > 0, "mu must be positive");
                              require(p.eta > -1 && p.eta < 1, "eta must lie in (-1, 1)");
                              require(p.m > 1, "m must exceed 1");
                              require(p.phi > 0, "phi must be positive");
                          },
                          [](const KappaMuParams& p) {
                              require(p.mu > 0, "mu must be positive");
                              require(p.kappa > 0, "kappa must be positive");
                              require(p.phi > 0, "phi must be positive");
                          },
                          [](const KappaMuIGParams& p) {
                              require(p.mu > 0, "mu must be positive");
                              require(p.kappa > 0, "kappa must be positive");
                              require(p.m > 1, "m must exceed 1");
                              require(p.phi > 0, "phi must be positive");
                          }},
               params);
}

LinkSeries link_series(const LinkSpec& spec, int terms) {
    if (terms < 1) throw ConfigError("series_terms must be at least 1");
    LinkSeries out{};
    std::visit(
        overloaded{
            [&](const EtaMuParams& p) {
                auto [h, H] = eta_consts(p.eta);
                double mu = p.mu, phi = p.phi;
                out.rate = 2.0 * mu * h / phi;
                out.m = 0.0;
                out.composite = false;
                double la1 = std::log(2.0 * std::sqrt(std::numbers::pi)) + (mu + 0.5) * std::log(mu) +
                             mu * std::log(h) - ln_gamma(mu) - (mu + 0.5) * std::log(phi);
                for (int n = 0; n < terms; ++n) {
                    SeriesTerm t{};
                    t.shape = 2.0 * mu + 2.0 * n;
                    if (H == 0.0 && n > 0) {
                        t.sign = 0;
                        t.log_coeff = -INFINITY;
                    } else {
                        // alpha_1 (eps_1/2)^{mu-1/2+2n} / H^{mu-1/2} with the H powers cancelled.
                        double lh = n > 0 ? 2.0 * n * std::log(mu * H / phi) : 0.0;
                        t.sign = 1;
                        t.log_coeff = la1 + (mu - 0.5) * std::log(mu / phi) + lh - ln_gamma(n + 1.0) -
                                      ln_gamma(mu + 0.5 + n);
                    }
                    out.terms.push_back(t);
                }
            },
            [&](const KappaMuParams& p) {
                double mu = p.mu, k = p.kappa, phi = p.phi;
                out.rate = mu * (1.0 + k) / phi;
                out.m = 0.0;
                out.composite = false;
                double ld1 = std::log(mu) + 0.5 * (mu + 1.0) * std::log1p(k) - 0.5 * (mu - 1.0) * std::log(k) -
                             0.5 * (mu + 1.0) * std::log(phi) - mu * k;
                for (int r = 0; r < terms; ++r) {
                    double e = mu - 1.0 + 2.0 * r;
                    SeriesTerm t{};
                    t.shape = mu + r;
                    t.sign = 1;
                    t.log_coeff = ld1 + e * std::log(mu) + 0.5 * e * std::log(k * (1.0 + k) / phi) -
                                  ln_gamma(r + 1.0) - ln_gamma(mu + r);
                    out.terms.push_back(t);
                }
            },
            [&](const EtaMuIGParams& p) {
                auto [h, H] = eta_consts(p.eta);
                double mu = p.mu, m = p.m, phi = p.phi;
                double mp = m * phi;
                out.rate = 2.0 * h * mu / mp;
                out.m = m;
                out.composite = true;
                double e1 = 0.5 * (m + 2.0 * mu), e2 = 0.5 * (m + 2.0 * mu + 1.0), e3 = 0.5 * (2.0 * mu + 1.0);
                double ll1 = 2.0 * mu * std::log(2.0) + 2.0 * mu * std::log(mu) + m * std::log(mp) +
                             mu * std::log(h) - ln_beta(m, 2.0 * mu);
                for (int r = 0; r < terms; ++r) {
                    SeriesTerm t{};
                    t.shape = 2.0 * mu + 2.0 * r;
                    if (H == 0.0 && r > 0) {
                        t.sign = 0;
                        t.log_coeff = -INFINITY;
                    } else {
                        double lh = r > 0 ? 2.0 * r * std::log(2.0 * H * mu) : 0.0;
                        t.sign = 1;
                        t.log_coeff = ll1 + lpoch(e1, r) + lpoch(e2, r) + lh - ln_gamma(r + 1.0) - lpoch(e3, r) -
                                      (m + 2.0 * mu + 2.0 * r) * std::log(mp);
                    }
                    out.terms.push_back(t);
                }
            },
            [&](const KappaMuIGParams& p) {
                double mu = p.mu, k = p.kappa, m = p.m, phi = p.phi;
                double mp = m * phi;
                out.rate = (k * mu + mu) / mp;
                out.m = m;
                out.composite = true;
                for (int r = 0; r < terms; ++r) {
                    double ld3 = mu * std::log(mu) + m * std::log(mp) - k * mu + mu * std::log1p(k) - ln_beta(m, mu) -
                                 (m + mu + r) * std::log(mp);
                    SeriesTerm t{};
                    t.shape = mu + r;
                    t.sign = 1;
                    t.log_coeff = ld3 + r * std::log(k * (k + 1.0) * mu * mu) + lpoch(m + mu, r) - ln_gamma(r + 1.0) -
                                  lpoch(mu, r);
                    out.terms.push_back(t);
                }
            }},
        spec.params);
    return out;
}

std::vector<double> mixture_log_weights(const LinkSeries& s) {
    std::vector<double> w;
    w.reserve(s.terms.size());
    for (const auto& t : s.terms) {
        if (t.sign == 0) {
            w.push_back(-INFINITY);
            continue;
        }
        double k = t.shape;
        if (s.composite)
            w.push_back(t.log_coeff + ln_beta(k, s.m) - k * std::log(s.rate));
        else
            w.push_back(t.log_coeff + ln_gamma(k) - k * std::log(s.rate));
    }
    return w;
}

bool integer_shapes(const LinkSpec& spec, int terms) {
    LinkSeries s = link_series(spec, terms);
    for (const auto& t : s.terms)
        if (t.sign != 0 && !is_integer(t.shape, 1e-9)) return false;
    return true;
}

int converged_series_terms(const LinkSpec& spec, double tail_tol, int cap) {
    for (int n = 25;; n = std::min(2 * n, cap)) {
        std::vector<double> lw = mixture_log_weights(link_series(spec, n));
        double sum = 0.0, c = 0.0;
        for (double l : lw) {
            double y = std::exp(l) - c;
            double t = sum + y;
            c = (t - sum) - y;
            sum = t;
        }
        if (1.0 - sum <= tail_tol || n >= cap) {
            // Trim to the shortest prefix that still meets the tolerance.
            double acc = 1.0;
            for (std::size_t i = 0; i < lw.size(); ++i) {
                acc -= std::exp(lw[i]);
                if (acc <= tail_tol) return static_cast<int>(i) + 1;
            }
            return n;
        }
    }
}

DensityValue pdf_link_checked(const LinkSpec& spec, double snr, const TruncationPolicy& trunc) {
    if (!(snr > 0.0)) return {0.0, false};
    LinkSeries s = link_series(spec, trunc.series_terms);
    double lx = std::log(snr);
    double sum = 0.0, last = 0.0;
    for (const auto& t : s.terms) {
        if (t.sign == 0) continue;
        double l = t.log_coeff + (t.shape - 1.0) * lx;
        if (s.composite)
            l -= (s.m + t.shape) * std::log1p(s.rate * snr);
        else
            l -= s.rate * snr;
        last = std::exp(l);
        sum += last;
    }
    return {sum, last > 1e-10 * sum};
}

double pdf_link(const LinkSpec& spec, double snr, const TruncationPolicy& trunc) {
    return pdf_link_checked(spec, snr, trunc).value;
}

double pdf_link_direct(const LinkSpec& spec, double snr) {
    if (!(snr > 0.0)) return 0.0;
    double x = snr;
    return std::visit(
        overloaded{
            [x](const EtaMuParams& p) {
                auto [h, H] = eta_consts(p.eta);
                double mu = p.mu, phi = p.phi;
                double bs = 2.0 * mu * h / phi;
                if (H == 0.0) {
                    double k = 2.0 * mu;
                    return std::exp(k * std::log(bs) + (k - 1.0) * std::log(x) - bs * x - ln_gamma(k));
                }
                double e1 = 2.0 * mu * H / phi;
                double la1 = std::log(2.0 * std::sqrt(std::numbers::pi)) + (mu + 0.5) * std::log(mu) +
                             mu * std::log(h) - ln_gamma(mu) - (mu - 0.5) * std::log(H) - (mu + 0.5) * std::log(phi);
                double bi = bessel_i_scaled(mu - 0.5, e1 * x);
                return std::exp(la1 + (mu - 0.5) * std::log(x) - (bs - e1) * x) * bi;
            },
            [x](const KappaMuParams& p) {
                double mu = p.mu, k = p.kappa, phi = p.phi;
                double rate = mu * (1.0 + k) / phi;
                double arg = 2.0 * mu * std::sqrt(k * (1.0 + k) * x / phi);
                double ld1 = std::log(mu) + 0.5 * (mu + 1.0) * std::log1p(k) - 0.5 * (mu - 1.0) * std::log(k) -
                             0.5 * (mu + 1.0) * std::log(phi) - mu * k;
                if (arg < 1e-100) {
                    // Leading term of the Bessel series, in logs; arg may underflow.
                    double lz = std::log(mu) + 0.5 * (std::log(k) + std::log1p(k) + std::log(x) - std::log(phi));
                    double li = (mu - 1.0) * lz - ln_gamma(mu);
                    return std::exp(ld1 + 0.5 * (mu - 1.0) * std::log(x) - rate * x + li);
                }
                double bi = bessel_i_scaled(mu - 1.0, arg);
                return std::exp(ld1 + 0.5 * (mu - 1.0) * std::log(x) - rate * x + arg) * bi;
            },
            [x](const EtaMuIGParams& p) {
                auto [h, H] = eta_consts(p.eta);
                double mu = p.mu, m = p.m, phi = p.phi;
                double mp = m * phi;
                double den = mp + 2.0 * h * mu * x;
                double z = 2.0 * H * mu * x / den;
                double f = gauss_2f1(0.5 * (m + 2.0 * mu), 0.5 * (m + 2.0 * mu + 1.0), 0.5 * (2.0 * mu + 1.0), z * z);
                double l = 2.0 * mu * std::log(2.0 * mu) + m * std::log(mp) + mu * std::log(h) +
                           (2.0 * mu - 1.0) * std::log(x) - ln_beta(m, 2.0 * mu) - (m + 2.0 * mu) * std::log(den);
                return std::exp(l) * f;
            },
            [x](const KappaMuIGParams& p) {
                double mu = p.mu, k = p.kappa, m = p.m, phi = p.phi;
                double mp = m * phi;
                double den = mu * (k + 1.0) * x + mp;
                double z = mu * mu * k * (k + 1.0) * x / den;
                double f = confluent_1f1(m + mu, mu, z);
                double l = -mu * k + mu * std::log(mu) + mu * std::log1p(k) + m * std::log(mp) +
                           (mu - 1.0) * std::log(x) - ln_beta(m, mu) - (m + mu) * std::log(den);
                return std::exp(l) * f;
            }},
        spec.params);
}

double ccdf_link(const LinkSpec& spec, double snr, const TruncationPolicy& trunc) {
    if (!(snr > 0.0)) return 1.0;
    LinkSeries s = link_series(spec, trunc.series_terms);
    double x = snr;
    std::vector<double> logs;
    logs.reserve(s.terms.size());
    if (!s.composite) {
        // sum coeff * rate^{-k} * Gamma(k, rate x)
        for (const auto& t : s.terms) {
            if (t.sign == 0) continue;
            double k = t.shape;
            logs.push_back(t.log_coeff - k * std::log(s.rate) + log_upper_inc_gamma(k, s.rate * x));
        }
        return std::min(1.0, std::exp(log_sum(logs)));
    }
    double m = s.m, b = s.rate;
    if (m * std::log1p(1.0 / (b * x)) > 600.0) {
        // Deep left tail: (1+1/(bx))^m overflows inside the 2F1 form. Use the
        // leading term of each component's lower tail instead.
        std::vector<double> w = mixture_log_weights(s);
        double lower = 0.0;
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            if (s.terms[i].sign == 0) continue;
            double k = s.terms[i].shape;
            lower += std::exp(w[i] + k * std::log(b * x) - std::log(k) - ln_beta(k, m));
        }
        return std::max(0.0, 1.0 - lower);
    }
    std::vector<double> w = mixture_log_weights(s);
    double lbx = std::log(b * x), l1bx = std::log1p(b * x);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        const auto& t = s.terms[i];
        if (t.sign == 0) continue;
        double k = t.shape;
        if (is_integer(k, 1e-12) && k < 2000.0) {
            // Integer shape: the beta-prime tail is a finite negative-binomial sum.
            int kk = static_cast<int>(std::lround(k));
            double lt = -m * l1bx;
            for (int j = 0; j < kk; ++j) {
                logs.push_back(w[i] + lt);
                lt += std::log((m + j) / (j + 1.0)) + lbx - l1bx;
            }
            continue;
        }
        double f = gauss_2f1(m + k, m, m + 1.0, -1.0 / (b * x));
        logs.push_back(t.log_coeff - m * std::log(x) - (m + k) * std::log(b) - std::log(m) + std::log(f));
    }
    return std::clamp(std::exp(log_sum(logs)), 0.0, 1.0);
}

double ccdf_link_reexpanded(const LinkSpec& spec, double snr, int outer_terms, int inner_terms) {
    LinkSeries s = link_series(spec, outer_terms);
    if (!s.composite) throw ConfigError("re-expanded CCDF applies to composite links only");
    double m = s.m, b = s.rate, x = snr;
    double sum = 0.0;
    for (const auto& t : s.terms) {
        if (t.sign == 0) continue;
        double k = t.shape;
        double pre = std::exp(t.log_coeff - m * std::log(x) - (m + k) * std::log(b) - std::log(m));
        double inner = 0.0;
        double term = 1.0;
        for (int r2 = 0; r2 < inner_terms; ++r2) {
            inner += term;
            term *= (m + r2) * (m + k + r2) / ((r2 + 1.0) * (m + 1.0 + r2)) * (-1.0 / (b * x));
        }
        sum += pre * inner;
    }
    return sum;
}

double mean_link_snr(const LinkSpec& spec) {
    if (spec.composite()) {
        double m = spec.m();
        if (!(m > 1.0)) throw std::domain_error("composite mean requires m > 1");
        return spec.phi() * m / (m - 1.0);
    }
    return spec.phi();
}

}  // namespace secrescope
