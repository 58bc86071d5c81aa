#include "secrescope/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "secrescope/cascade.hpp"
#include "secrescope/errors.hpp"

namespace secrescope {

namespace {

// Polynomial in u = Pr(first > x) Pr(second > x); index is the power of u.
using Poly = std::vector<double>;

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly poly_pow(const Poly& a, int n) {
    Poly r{1.0};
    for (int i = 0; i < n; ++i) r = poly_mul(r, a);
    return r;
}

// (1 - u)^n with binomial coefficients.
Poly one_minus_u_pow(int n) {
    Poly c(static_cast<std::size_t>(n) + 1);
    double b = 1.0;
    for (int i = 0; i <= n; ++i) {
        c[i] = (i % 2 ? -b : b);
        b = b * (n - i) / (i + 1);
    }
    return c;
}

Poly one_minus(Poly p) {
    for (double& v : p) v = -v;
    p[0] += 1.0;
    return p;
}

double max_abs(const Poly& a, const Poly& b) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    for (double v : b) m = std::max(m, std::abs(v));
    return m;
}

struct HopLists {
    TermList s1, s2, f1, f2;
    std::vector<TermList> p1, p2;  // powers of s1, s2
    double certify_error = 0.0;
};

// Powers of u are later scaled by polynomial coefficients as large as
// |g|max, so they are pruned that much finer than the final list.
HopLists hop_lists(const HopPair& pair, TruncationPolicy trunc, int degree, double gmax) {
    trunc.prune_eps /= std::max(gmax, 1.0);
    CoefficientCache cache = CoefficientCache::build(pair, trunc);
    cache.require_integer_shapes();
    HopLists h;
    h.s1 = ccdf_link_terms(cache.first, cache.first_log_w, trunc);
    h.s2 = ccdf_link_terms(cache.second, cache.second_log_w, trunc);
    h.f1 = pdf_link_terms(cache.first, trunc);
    h.f2 = pdf_link_terms(cache.second, trunc);
    DualHopTerms dh{termlist_multiply(h.s1, h.s2),
                    termlist_add(termlist_multiply(h.f1, h.s2), termlist_multiply(h.f2, h.s1))};
    h.certify_error = certify_series(cache, dh).max_abs_error;

    // Multinomial powers of each single-link series, by repeated products.
    h.p1.push_back(TermList::constant(1.0, trunc));
    h.p2.push_back(TermList::constant(1.0, trunc));
    h.p2[0].beta = h.s2.beta;
    for (int i = 1; i <= degree; ++i) {
        h.p1.push_back(termlist_multiply(h.p1.back(), h.s1));
        h.p2.push_back(termlist_multiply(h.p2.back(), h.s2));
    }
    return h;
}

void append_scaled(TermList& out, const TermList& part, double c) {
    if (c == 0.0) return;
    SignedLog s = SignedLog::from(c);
    for (const auto& t : part.terms) out.push(t.coeff * s, t.power, t.rate, t.shadow);
    out.dropped_mass += part.dropped_mass * std::abs(c);
}

// sum_i g_i u^i
TermList expand_tail(const HopLists& h, const Poly& g, const TruncationPolicy& trunc) {
    TermList out = TermList::empty_like(trunc, h.s2.beta);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0.0) continue;
        append_scaled(out, termlist_multiply(h.p1[i], h.p2[i]), g[i]);
    }
    out.compact();
    return out;
}

// f_pair * sum_i g_i u^i, with f_pair = f1 s2 + f2 s1 the dual-hop density.
TermList expand_density(const HopLists& h, const Poly& g, const TruncationPolicy& trunc) {
    TermList out = TermList::empty_like(trunc, h.s2.beta);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == 0.0) continue;
        append_scaled(out, termlist_multiply(termlist_multiply(h.f1, h.p1[i]), h.p2[i + 1]), g[i]);
        append_scaled(out, termlist_multiply(h.p1[i + 1], termlist_multiply(h.f2, h.p2[i])), g[i]);
    }
    out.compact();
    return out;
}

}  // namespace

OrderStatTerms sigma_min_terms(const SystemConfig& sys, const TruncationPolicy& trunc) {
    sys.validate();
    const int K = sys.K, M = sys.M;
    // Dual-hop CDF is 1 - u; best relay CDF (1 - u)^K.
    Poly below_k1 = one_minus_u_pow(K - 1);
    Poly s_best = one_minus(one_minus_u_pow(K));
    // f_min / f_pair = M K (1-u)^{K-1} [1 - (1-u)^K]^{M-1}
    Poly density = poly_mul(below_k1, poly_pow(s_best, M - 1));
    for (double& v : density) v *= static_cast<double>(M) * K;
    Poly tail = poly_pow(s_best, M);

    HopLists h = hop_lists(sys.main_pair(), trunc, static_cast<int>(tail.size()), max_abs(density, tail));
    OrderStatTerms out;
    out.pdf = expand_density(h, density, trunc);
    out.tail = expand_tail(h, tail, trunc);
    out.certify_error = h.certify_error;
    return out;
}

OrderStatTerms sigma_max_terms(const SystemConfig& sys, const TruncationPolicy& trunc) {
    sys.validate();
    const int n = sys.K * sys.N;
    // f_max / f_pair = N K (1-u)^{KN-1}; CDF (1-u)^{KN}.
    Poly density = one_minus_u_pow(n - 1);
    for (double& v : density) v *= n;
    Poly tail = one_minus_u_pow(n);

    HopLists h = hop_lists(sys.eaves_pair(), trunc, n + 1, max_abs(density, tail));
    OrderStatTerms out;
    out.pdf = expand_density(h, density, trunc);
    out.tail = expand_tail(h, tail, trunc);
    out.certify_error = h.certify_error;
    return out;
}

TermList pdf_sigma_min(const SystemConfig& sys, const TruncationPolicy& trunc) {
    return sigma_min_terms(sys, trunc).pdf;
}

TermList pdf_sigma_max(const SystemConfig& sys, const TruncationPolicy& trunc) {
    return sigma_max_terms(sys, trunc).pdf;
}

double pdf_sigma_min_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc) {
    if (!(x > 0.0)) return 0.0;
    HopPair p = sys.main_pair();
    double tail = ccdf_dualhop(p, x, trunc);
    double f = pdf_dualhop_direct(p, x, trunc);
    double f_best = sys.K * f * std::pow(1.0 - tail, sys.K - 1);
    double s_best = -std::expm1(sys.K * std::log1p(-tail));
    return sys.M * f_best * std::pow(s_best, sys.M - 1);
}

double ccdf_sigma_min_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc) {
    if (!(x > 0.0)) return 1.0;
    double tail = ccdf_dualhop(sys.main_pair(), x, trunc);
    double s_best = -std::expm1(sys.K * std::log1p(-tail));
    return std::pow(s_best, sys.M);
}

double pdf_sigma_max_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc) {
    if (!(x > 0.0)) return 0.0;
    HopPair p = sys.eaves_pair();
    int n = sys.K * sys.N;
    double tail = ccdf_dualhop(p, x, trunc);
    return n * pdf_dualhop_direct(p, x, trunc) * std::pow(1.0 - tail, n - 1);
}

double cdf_sigma_max_direct(const SystemConfig& sys, double x, const TruncationPolicy& trunc) {
    if (!(x > 0.0)) return 0.0;
    double tail = ccdf_dualhop(sys.eaves_pair(), x, trunc);
    return std::pow(1.0 - tail, sys.K * sys.N);
}

}  // namespace secrescope
