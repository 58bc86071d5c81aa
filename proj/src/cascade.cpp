#include "secrescope/cascade.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "secrescope/errors.hpp"

namespace secrescope {

namespace {

std::atomic<std::size_t> g_clamps{0};

double clamp_nonneg(double v) {
    if (v < 0.0) {
        g_clamps.fetch_add(1, std::memory_order_relaxed);
        return 0.0;
    }
    return v;
}

double bulk_scale(const HopPair& p) {
    return std::min(mean_link_snr(p.first), mean_link_snr(p.second));
}

}  // namespace

void HopPair::validate() const {
    first.validate();
    second.validate();
    Family a = first.family(), b = second.family();
    if (scenario == 1) {
        if (a != Family::EtaMu || b != Family::EtaMuIG)
            throw ConfigError("scenario 1 needs an eta_mu first hop and an eta_mu_ig second hop");
    } else if (scenario == 2) {
        if (a != Family::KappaMu || b != Family::KappaMuIG)
            throw ConfigError("scenario 2 needs a kappa_mu first hop and a kappa_mu_ig second hop");
    } else {
        throw ConfigError("scenario must be 1 or 2");
    }
}

void SystemConfig::validate() const {
    if (K < 1) throw ConfigError("K must be at least 1");
    if (M < 1) throw ConfigError("M must be at least 1");
    if (N < 1) throw ConfigError("N must be at least 1");
    if (!(target_rate >= 0.0)) throw ConfigError("target_rate must be nonnegative");
    main_pair().validate();
    eaves_pair().validate();
}

CoefficientCache CoefficientCache::build(const HopPair& pair, const TruncationPolicy& trunc) {
    pair.validate();
    trunc.validate();
    CoefficientCache c;
    c.pair = pair;
    c.trunc = trunc;
    c.first = link_series(pair.first, trunc.series_terms);
    c.second = link_series(pair.second, trunc.series_terms);
    c.first_log_w = mixture_log_weights(c.first);
    c.second_log_w = mixture_log_weights(c.second);
    return c;
}

void CoefficientCache::require_integer_shapes() const {
    if (!trunc.integer_exponent_mode)
        throw IntegralityError("closed-form expansion disabled (integer_exponent_mode is off)");
    auto check = [](const LinkSeries& s, const LinkSpec& spec) {
        for (const auto& t : s.terms) {
            if (t.sign != 0 && !is_integer(t.shape, 1e-9))
                throw IntegralityError("non-integer series shape " + std::to_string(t.shape) + " for " +
                                       family_name(spec.family()) + " (mu = " + std::to_string(spec.mu()) +
                                       ")");
        }
    };
    check(first, pair.first);
    check(second, pair.second);
}

double ccdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc) {
    if (!(snr > 0.0)) return 1.0;
    return ccdf_link(pair.first, snr, trunc) * ccdf_link(pair.second, snr, trunc);
}

double cdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc) {
    return std::clamp(1.0 - ccdf_dualhop(pair, snr, trunc), 0.0, 1.0);
}

double pdf_dualhop(const HopPair& pair, double snr, const TruncationPolicy& trunc) {
    if (!(snr > 0.0)) return 0.0;
    double v = pdf_link(pair.first, snr, trunc) * ccdf_link(pair.second, snr, trunc) +
               pdf_link(pair.second, snr, trunc) * ccdf_link(pair.first, snr, trunc);
    return clamp_nonneg(v);
}

double pdf_dualhop_direct(const HopPair& pair, double snr, const TruncationPolicy& trunc) {
    if (!(snr > 0.0)) return 0.0;
    return pdf_link_direct(pair.first, snr) * ccdf_link(pair.second, snr, trunc) +
           pdf_link_direct(pair.second, snr) * ccdf_link(pair.first, snr, trunc);
}

double cdf_best_relay(const HopPair& pair, int k_relays, double snr, const TruncationPolicy& trunc) {
    if (k_relays < 1) throw ConfigError("K must be at least 1");
    return std::pow(cdf_dualhop(pair, snr, trunc), k_relays);
}

double pdf_best_relay(const HopPair& pair, int k_relays, double snr, const TruncationPolicy& trunc) {
    if (k_relays < 1) throw ConfigError("K must be at least 1");
    double f = pdf_dualhop(pair, snr, trunc);
    if (k_relays == 1) return f;
    return k_relays * f * std::pow(cdf_dualhop(pair, snr, trunc), k_relays - 1);
}

std::size_t clamp_events() { return g_clamps.load(std::memory_order_relaxed); }

TermList pdf_link_terms(const LinkSeries& s, const TruncationPolicy& trunc) {
    TermList out = TermList::empty_like(trunc, s.composite ? s.rate : 0.0);
    for (const auto& t : s.terms) {
        if (t.sign == 0) continue;
        SignedLog c{t.sign, t.log_coeff};
        if (s.composite)
            out.push(c, t.shape - 1.0, 0.0, s.m + t.shape);
        else
            out.push(c, t.shape - 1.0, s.rate, 0.0);
    }
    out.compact();
    return out;
}

TermList ccdf_link_terms(const LinkSeries& s, const std::vector<double>& log_w, const TruncationPolicy& trunc) {
    TermList out = TermList::empty_like(trunc, s.composite ? s.rate : 0.0);
    double lb = std::log(s.rate);
    for (std::size_t i = 0; i < s.terms.size(); ++i) {
        const auto& t = s.terms[i];
        if (t.sign == 0) continue;
        if (!is_integer(t.shape, 1e-9)) throw IntegralityError("finite tail expansion needs integer shapes");
        int k = static_cast<int>(std::lround(t.shape));
        for (int j = 0; j < k; ++j) {
            if (s.composite) {
                // Beta-prime tail: (m)_j / j! (beta x)^j (1 + beta x)^{-(m+j)}.
                double l = log_w[i] + ln_gamma(s.m + j) - ln_gamma(s.m) - ln_gamma(j + 1.0) + j * lb;
                out.push({1, l}, j, 0.0, s.m + j);
            } else {
                // Gamma tail: e^{-bx} (bx)^j / j!.
                double l = log_w[i] + j * lb - ln_gamma(j + 1.0);
                out.push({1, l}, j, s.rate, 0.0);
            }
        }
    }
    out.compact();
    return out;
}

DualHopTerms dualhop_terms(const CoefficientCache& cache) {
    cache.require_integer_shapes();
    const auto& tr = cache.trunc;
    TermList s1 = ccdf_link_terms(cache.first, cache.first_log_w, tr);
    TermList s2 = ccdf_link_terms(cache.second, cache.second_log_w, tr);
    TermList f1 = pdf_link_terms(cache.first, tr);
    TermList f2 = pdf_link_terms(cache.second, tr);
    DualHopTerms out;
    out.ccdf = termlist_multiply(s1, s2);
    out.pdf = termlist_add(termlist_multiply(f1, s2), termlist_multiply(f2, s1));
    return out;
}

SeriesCertificate certify_series(const CoefficientCache& cache, const DualHopTerms& terms, double tol) {
    SeriesCertificate cert;
    double scale = bulk_scale(cache.pair);
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        double x = scale * std::pow(10.0, -3.0 + 5.0 * i / (n - 1));
        double e1 = std::abs(terms.ccdf.evaluate(x) - ccdf_dualhop(cache.pair, x, cache.trunc));
        double e2 = std::abs(terms.pdf.evaluate(x) - pdf_dualhop(cache.pair, x, cache.trunc));
        cert.max_abs_error = std::max({cert.max_abs_error, e1, e2 * scale});
        ++cert.points;
    }
    cert.passed = cert.max_abs_error <= tol;
    return cert;
}

}  // namespace secrescope
